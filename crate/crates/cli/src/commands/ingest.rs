//! `ingest`: load an article CSV, apply the standard filters, and emit
//! yearly aggregates plus a drop report.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use refgrowth::corpus::{aggregate_yearly, load_and_filter, write_aggregate_csv, IngestOptions};

use super::{absolutize, run_into};
use crate::errors::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Article CSV (id,year,field,n_references,n_pages).
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Rows with fewer references are dropped.
    #[arg(long, default_value_t = 5)]
    pub min_refs: u64,
    #[arg(long, default_value_t = 1500)]
    pub year_min: i32,
    #[arg(long, default_value_t = 2100)]
    pub year_max: i32,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct IngestSpec {
    pub input_csv: PathBuf,
    pub min_refs: u64,
    pub year_min: i32,
    pub year_max: i32,
}

pub fn run(args: IngestArgs) -> CliResult<()> {
    let spec = IngestSpec {
        input_csv: absolutize(&args.input)?,
        min_refs: args.min_refs,
        year_min: args.year_min,
        year_max: args.year_max,
    };
    run_into("ingest", &spec, &args.out, |dir| execute(&spec, dir))
}

pub fn execute(spec: &IngestSpec, out_dir: &Path) -> CliResult<Vec<String>> {
    if spec.year_min > spec.year_max {
        return Err(CliError::config(format!(
            "year_min {} exceeds year_max {}",
            spec.year_min, spec.year_max
        )));
    }
    let opts = IngestOptions {
        min_refs: spec.min_refs,
        year_range: spec.year_min..=spec.year_max,
    };
    let (records, report) = load_and_filter(&spec.input_csv, &opts)?;
    let aggregates = aggregate_yearly(&records)?;

    let file = std::fs::File::create(out_dir.join("aggregate.csv"))?;
    write_aggregate_csv(&aggregates, file)?;

    let json = serde_json::to_string_pretty(&report)?;
    std::fs::write(out_dir.join("drop_report.json"), json + "\n")?;

    Ok(vec![
        "aggregate.csv".to_string(),
        "drop_report.json".to_string(),
    ])
}
