//! `simulate`: draw a synthetic corpus from a config file.
//!
//! Precedence is flags over config file over defaults: `--seed` replaces
//! the seed from the `[simulation]` table when given.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use refgrowth::config::{ConfigFile, SimulationSpec};
use refgrowth::corpus::write_article_csv;
use refgrowth::montecarlo::simulate;

use super::{base_dir_of, run_into, spec_from_curve, spec_from_kernel};
use crate::errors::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Config file with [growth], [kernel] and [simulation] tables.
    #[arg(long, value_name = "FILE")]
    pub config: PathBuf,
    /// Overrides the seed from the config file.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Field label stamped on the exported article records.
    #[arg(long, default_value = "simulated")]
    pub label: String,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SimulateSpec {
    pub simulation: SimulationSpec,
    pub label: String,
}

pub fn run(args: SimulateArgs) -> CliResult<()> {
    let file = ConfigFile::load(&args.config)?;
    let growth_spec = file.require_growth(&args.config)?.clone();
    let kernel_spec = file.require_kernel(&args.config)?.clone();
    let mut settings = file.simulation.clone().ok_or_else(|| {
        CliError::config(format!(
            "{} has no [simulation] table",
            args.config.display()
        ))
    })?;
    if let Some(seed) = args.seed {
        settings.seed = seed;
    }

    // Materialize file-backed tables so the stored spec is self-contained.
    let base = base_dir_of(&args.config);
    let growth = spec_from_curve(&growth_spec.build(&base)?);
    let kernel = spec_from_kernel(&kernel_spec.build(&base)?);

    let spec = SimulateSpec {
        simulation: SimulationSpec {
            growth,
            kernel,
            settings,
        },
        label: args.label,
    };
    run_into("simulate", &spec, &args.out, |dir| execute(&spec, dir))
}

pub fn execute(spec: &SimulateSpec, out_dir: &Path) -> CliResult<Vec<String>> {
    let config = spec.simulation.build(Path::new("."))?;
    let corpus = simulate(&config)?;

    let corpus_file = std::fs::File::create(out_dir.join("corpus.csv"))?;
    corpus.write_csv(corpus_file)?;

    let records = corpus.to_article_records(&spec.label);
    let article_file = std::fs::File::create(out_dir.join("articles.csv"))?;
    write_article_csv(&records, article_file)?;

    Ok(vec!["corpus.csv".to_string(), "articles.csv".to_string()])
}
