//! `harvest`: fetch reference counts per DOI from a CrossRef-style API,
//! caching responses on disk so reruns replay offline.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use refgrowth::corpus::{harvest_reference_counts, write_article_csv, HarvestConfig};

use super::{absolutize, run_into};
use crate::errors::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct HarvestArgs {
    /// File with one DOI per line (blank lines and # comments ignored).
    #[arg(long, value_name = "FILE")]
    pub dois: PathBuf,
    /// Base URL of the metadata endpoint.
    #[arg(long, value_name = "URL", env = "REFGROWTH_ENDPOINT")]
    pub endpoint: String,
    /// Maximum request rate in requests per second.
    #[arg(long, default_value_t = 1.0, env = "REFGROWTH_RATE")]
    pub rate: f64,
    /// Response cache directory.
    #[arg(long, value_name = "DIR", env = "REFGROWTH_CACHE")]
    pub cache: PathBuf,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HarvestSpec {
    pub dois: Vec<String>,
    pub endpoint: String,
    pub rate_limit: f64,
    pub cache_dir: PathBuf,
}

// Cache hits are deliberately not part of the summary: a replay from cache
// must reproduce the live run's outputs byte for byte.
#[derive(Debug, Serialize)]
struct HarvestSummary<'a> {
    requested: usize,
    harvested: usize,
    failures: &'a [refgrowth::corpus::HarvestFailure],
}

pub fn run(args: HarvestArgs) -> CliResult<()> {
    let text =
        std::fs::read_to_string(&args.dois).map_err(|e| CliError::from(refgrowth::Error::Io(e)))?;
    let dois: Vec<String> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect();
    let spec = HarvestSpec {
        dois,
        endpoint: args.endpoint,
        rate_limit: args.rate,
        cache_dir: absolutize(&args.cache)?,
    };
    run_into("harvest", &spec, &args.out, |dir| execute(&spec, dir))
}

pub fn execute(spec: &HarvestSpec, out_dir: &Path) -> CliResult<Vec<String>> {
    let config = HarvestConfig {
        rate_limit: spec.rate_limit,
        ..HarvestConfig::new(spec.endpoint.clone(), spec.cache_dir.clone())
    };
    let report = harvest_reference_counts(&spec.dois, &config)?;

    let file = std::fs::File::create(out_dir.join("records.csv"))?;
    write_article_csv(&report.records, file)?;

    let summary = HarvestSummary {
        requested: spec.dois.len(),
        harvested: report.records.len(),
        failures: &report.failures,
    };
    let json = serde_json::to_string_pretty(&summary)?;
    std::fs::write(out_dir.join("harvest_report.json"), json + "\n")?;

    Ok(vec![
        "records.csv".to_string(),
        "harvest_report.json".to_string(),
    ])
}
