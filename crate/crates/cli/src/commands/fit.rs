//! `fit`: least-squares lines over yearly aggregates and production series.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use refgrowth::config::read_two_column_csv;
use refgrowth::corpus::read_aggregate_csv;
use refgrowth::inference::{fit_affine_q, ols_fit, yearly_increment, FitResult};

use super::{absolutize, integer_year_series, run_into};
use crate::errors::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum FitMode {
    /// Mean list length against the year.
    #[value(name = "LvT")]
    LvT,
    /// Cumulative production against the year.
    #[value(name = "PvT")]
    PvT,
    /// Mean list length against cumulative production (estimates q).
    #[value(name = "LvP")]
    LvP,
    /// Yearly production increments against the year.
    #[value(name = "increment")]
    Increment,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Yearly aggregate CSV (year,field,article_count,mean_refs,median_refs).
    #[arg(long, value_name = "FILE")]
    pub aggregate: Option<PathBuf>,
    /// Two-column production series CSV (year, cumulative_count).
    #[arg(long, value_name = "FILE")]
    pub pseries: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: FitMode,
    /// Field label to select when the aggregate covers several fields.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FitSpec {
    pub mode: FitMode,
    pub aggregate_csv: Option<PathBuf>,
    pub pseries_csv: Option<PathBuf>,
    pub field: Option<String>,
}

#[derive(Debug, Serialize)]
struct FitOutput<'a> {
    mode: FitMode,
    x_label: &'static str,
    y_label: &'static str,
    fit: &'a FitResult,
}

pub fn run(args: FitArgs) -> CliResult<()> {
    let spec = FitSpec {
        mode: args.mode,
        aggregate_csv: args.aggregate.as_deref().map(absolutize).transpose()?,
        pseries_csv: args.pseries.as_deref().map(absolutize).transpose()?,
        field: args.field,
    };
    run_into("fit", &spec, &args.out, |dir| execute(&spec, dir))
}

fn length_series(spec: &FitSpec) -> CliResult<Vec<(i32, f64)>> {
    let path = spec.aggregate_csv.as_ref().ok_or_else(|| {
        CliError::config("this mode needs --aggregate with a yearly aggregate CSV")
    })?;
    let file = std::fs::File::open(path).map_err(CliError::from)?;
    let aggregates = read_aggregate_csv(file)?;
    let fields: Vec<String> = {
        let mut fields: Vec<String> = aggregates.iter().map(|a| a.field_label.clone()).collect();
        fields.sort();
        fields.dedup();
        fields
    };
    let field = match (&spec.field, fields.as_slice()) {
        (Some(field), _) => {
            if !fields.iter().any(|f| f == field) {
                return Err(CliError::data(format!(
                    "field {field:?} not present; aggregate holds {fields:?}"
                )));
            }
            field.clone()
        }
        (None, [only]) => only.clone(),
        (None, _) => {
            return Err(CliError::data(format!(
                "aggregate holds several fields {fields:?}; pick one with --field"
            )))
        }
    };
    let mut series: Vec<(i32, f64)> = aggregates
        .iter()
        .filter(|a| a.field_label == field)
        .map(|a| (a.year, a.mean_refs))
        .collect();
    series.sort_by_key(|&(year, _)| year);
    Ok(series)
}

fn production_series(spec: &FitSpec) -> CliResult<Vec<(i32, f64)>> {
    let path = spec.pseries_csv.as_ref().ok_or_else(|| {
        CliError::config("this mode needs --pseries with a (year, cumulative_count) CSV")
    })?;
    let mut series = integer_year_series(&read_two_column_csv(path)?)?;
    series.sort_by_key(|&(year, _)| year);
    Ok(series)
}

pub fn execute(spec: &FitSpec, out_dir: &Path) -> CliResult<Vec<String>> {
    let (x_label, y_label, xs, ys): (&'static str, &'static str, Vec<f64>, Vec<f64>);
    let fit: FitResult;
    match spec.mode {
        FitMode::LvT => {
            let series = length_series(spec)?;
            xs = series.iter().map(|&(y, _)| y as f64).collect();
            ys = series.iter().map(|&(_, v)| v).collect();
            fit = ols_fit(&xs, &ys)?;
            (x_label, y_label) = ("year", "mean_refs");
        }
        FitMode::PvT => {
            let series = production_series(spec)?;
            xs = series.iter().map(|&(y, _)| y as f64).collect();
            ys = series.iter().map(|&(_, v)| v).collect();
            fit = ols_fit(&xs, &ys)?;
            (x_label, y_label) = ("year", "cumulative_count");
        }
        FitMode::Increment => {
            let series = production_series(spec)?;
            let increments = yearly_increment(&series)?;
            xs = increments.iter().map(|&(y, _)| y as f64).collect();
            ys = increments.iter().map(|&(_, v)| v).collect();
            fit = ols_fit(&xs, &ys)?;
            (x_label, y_label) = ("year", "yearly_increment");
        }
        FitMode::LvP => {
            let lengths = length_series(spec)?;
            let production = production_series(spec)?;
            // Fit over the years both series cover.
            let p_by_year: BTreeMap<i32, f64> = production.into_iter().collect();
            let mut aligned_p = Vec::new();
            let mut aligned_l = Vec::new();
            for &(year, l) in &lengths {
                if let Some(&p) = p_by_year.get(&year) {
                    aligned_p.push((year, p));
                    aligned_l.push((year, l));
                }
            }
            fit = fit_affine_q(&aligned_p, &aligned_l)?;
            xs = aligned_p.iter().map(|&(_, v)| v).collect();
            ys = aligned_l.iter().map(|&(_, v)| v).collect();
            (x_label, y_label) = ("cumulative_count", "mean_refs");
        }
    }

    let output = FitOutput {
        mode: spec.mode,
        x_label,
        y_label,
        fit: &fit,
    };
    let json = serde_json::to_string_pretty(&output)?;
    std::fs::write(out_dir.join("fit.json"), json + "\n")?;

    let file = std::fs::File::create(out_dir.join("fit.csv"))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record([x_label, y_label, "fitted"])
        .map_err(|e| CliError::data(e.to_string()))?;
    for (&x, &y) in xs.iter().zip(&ys) {
        let fitted = fit.intercept + fit.slope * x;
        w.write_record([x.to_string(), y.to_string(), fitted.to_string()])
            .map_err(|e| CliError::data(e.to_string()))?;
    }
    w.flush()?;

    Ok(vec!["fit.json".to_string(), "fit.csv".to_string()])
}
