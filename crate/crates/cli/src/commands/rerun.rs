//! `rerun`: replay a stored manifest into a fresh output directory.
//!
//! Deterministic commands reproduce their outputs byte for byte; harvest
//! answers from its response cache, so no network is needed.

use std::path::PathBuf;

use clap::Args;

use super::{agestats, distfit, fit, harvest, ingest, predict, run_into, simulate};
use crate::errors::{CliError, CliResult};
use crate::manifest;

#[derive(Debug, Args)]
pub struct RerunArgs {
    /// Manifest written by a previous run.
    #[arg(long, value_name = "FILE")]
    pub manifest: PathBuf,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

pub fn run(args: RerunArgs) -> CliResult<()> {
    let stored = manifest::load(&args.manifest)?;
    let spec = stored.spec;
    match stored.command.as_str() {
        "predict" => {
            let spec: predict::PredictSpec = serde_json::from_value(spec)?;
            run_into("predict", &spec, &args.out, |dir| {
                predict::execute(&spec, dir)
            })
        }
        "simulate" => {
            let spec: simulate::SimulateSpec = serde_json::from_value(spec)?;
            run_into("simulate", &spec, &args.out, |dir| {
                simulate::execute(&spec, dir)
            })
        }
        "agestats" => {
            let spec: agestats::AgeStatsSpec = serde_json::from_value(spec)?;
            run_into("agestats", &spec, &args.out, |dir| {
                agestats::execute(&spec, dir)
            })
        }
        "fit" => {
            let spec: fit::FitSpec = serde_json::from_value(spec)?;
            run_into("fit", &spec, &args.out, |dir| fit::execute(&spec, dir))
        }
        "distfit" => {
            let spec: distfit::DistfitSpec = serde_json::from_value(spec)?;
            run_into("distfit", &spec, &args.out, |dir| {
                distfit::execute(&spec, dir)
            })
        }
        "ingest" => {
            let spec: ingest::IngestSpec = serde_json::from_value(spec)?;
            run_into("ingest", &spec, &args.out, |dir| {
                ingest::execute(&spec, dir)
            })
        }
        "harvest" => {
            let spec: harvest::HarvestSpec = serde_json::from_value(spec)?;
            run_into("harvest", &spec, &args.out, |dir| {
                harvest::execute(&spec, dir)
            })
        }
        other => Err(CliError::config(format!(
            "manifest names unknown command {other:?}"
        ))),
    }
}
