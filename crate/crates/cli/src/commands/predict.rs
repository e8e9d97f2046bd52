//! `predict`: tabulate the model's predictions over a year range.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use refgrowth::config::{ConfigFile, GrowthSpec, KernelSpec};
use refgrowth::model::{
    age_survival_fraction, expected_list_length, mean_reference_age, median_reference_age,
};
use refgrowth::quad::QuadratureOptions;
use refgrowth::root::BisectionOptions;

use super::{base_dir_of, run_into, spec_from_curve, spec_from_kernel};
use crate::errors::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Config file holding a [growth] table.
    #[arg(long, value_name = "FILE")]
    pub growth: PathBuf,
    /// Config file holding a [kernel] table (may be the same file).
    #[arg(long, value_name = "FILE")]
    pub kernel: PathBuf,
    #[arg(long, value_name = "YEAR")]
    pub from_year: f64,
    #[arg(long, value_name = "YEAR")]
    pub to_year: f64,
    /// Row spacing in years.
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    /// Reference ages for survival columns, e.g. --ages 1,2,5.
    #[arg(long, value_delimiter = ',', value_name = "YEARS")]
    pub ages: Vec<f64>,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PredictSpec {
    pub growth: GrowthSpec,
    pub kernel: KernelSpec,
    pub from_year: f64,
    pub to_year: f64,
    pub step: f64,
    pub ages: Vec<f64>,
}

pub fn run(args: PredictArgs) -> CliResult<()> {
    let growth_file = ConfigFile::load(&args.growth)?;
    let kernel_file = ConfigFile::load(&args.kernel)?;
    let curve = growth_file
        .require_growth(&args.growth)?
        .build(&base_dir_of(&args.growth))?;
    let kernel = kernel_file
        .require_kernel(&args.kernel)?
        .build(&base_dir_of(&args.kernel))?;
    let spec = PredictSpec {
        growth: spec_from_curve(&curve),
        kernel: spec_from_kernel(&kernel),
        from_year: args.from_year,
        to_year: args.to_year,
        step: args.step,
        ages: args.ages,
    };
    run_into("predict", &spec, &args.out, |dir| execute(&spec, dir))
}

pub fn execute(spec: &PredictSpec, out_dir: &Path) -> CliResult<Vec<String>> {
    if spec.step <= 0.0 || !spec.step.is_finite() {
        return Err(CliError::config(format!(
            "step must be positive, got {}",
            spec.step
        )));
    }
    if spec.to_year < spec.from_year {
        return Err(CliError::config(format!(
            "to_year {} precedes from_year {}",
            spec.to_year, spec.from_year
        )));
    }
    let base = Path::new(".");
    let curve = spec.growth.build(base)?;
    let kernel = spec.kernel.build(base)?;
    let quad = QuadratureOptions::default();
    let bisect = BisectionOptions::default();

    let mut header = vec![
        "t".to_string(),
        "p_star".to_string(),
        "l_star".to_string(),
        "mean_age".to_string(),
        "median_age".to_string(),
    ];
    for age in &spec.ages {
        header.push(format!("survival_{age}"));
    }

    let file = std::fs::File::create(out_dir.join("predictions.csv"))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(&header)
        .map_err(|e| CliError::data(e.to_string()))?;

    let steps = ((spec.to_year - spec.from_year) / spec.step).round() as usize;
    for i in 0..=steps {
        let t = if i == steps {
            spec.to_year
        } else {
            spec.from_year + i as f64 * spec.step
        };
        let p_star = curve.restricted(t)?;
        let l_star = expected_list_length(&kernel, &curve, t, &quad)?;
        let mut row = vec![t.to_string(), p_star.to_string(), l_star.to_string()];
        if p_star > 0.0 {
            row.push(mean_reference_age(&curve, t, &quad)?.to_string());
            row.push(median_reference_age(&curve, t, &bisect)?.to_string());
            for &age in &spec.ages {
                row.push(age_survival_fraction(&curve, t, age)?.to_string());
            }
        } else {
            // Age statistics are undefined while the window holds nothing.
            row.extend(std::iter::repeat_n(String::new(), 2 + spec.ages.len()));
        }
        w.write_record(&row)
            .map_err(|e| CliError::data(e.to_string()))?;
    }
    w.flush()?;
    Ok(vec!["predictions.csv".to_string()])
}
