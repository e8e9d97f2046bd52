//! `agestats`: pooled empirical reference-age statistics for one cohort of
//! a simulated corpus.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use refgrowth::montecarlo::{empirical_age_stats, SimulatedCorpus};

use super::{absolutize, run_into};
use crate::errors::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct AgeStatsArgs {
    /// Corpus CSV written by `simulate`.
    #[arg(long, value_name = "FILE")]
    pub corpus: PathBuf,
    /// Cohort time to analyze.
    #[arg(long)]
    pub at: f64,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AgeStatsSpec {
    pub corpus_csv: PathBuf,
    pub at: f64,
}

#[derive(Debug, Serialize)]
struct AgeStatsOutput {
    at: f64,
    mean_age: f64,
    median_age: f64,
    n_references: usize,
}

pub fn run(args: AgeStatsArgs) -> CliResult<()> {
    let spec = AgeStatsSpec {
        corpus_csv: absolutize(&args.corpus)?,
        at: args.at,
    };
    run_into("agestats", &spec, &args.out, |dir| execute(&spec, dir))
}

pub fn execute(spec: &AgeStatsSpec, out_dir: &Path) -> CliResult<Vec<String>> {
    let file = std::fs::File::open(&spec.corpus_csv)
        .map_err(|e| CliError::from(refgrowth::Error::Io(e)))?;
    let corpus = SimulatedCorpus::read_csv(file)?;
    let stats = empirical_age_stats(&corpus, spec.at)?;

    let survival = stats.survival.unwrap_or_default();
    let cohort_time = corpus
        .cohorts
        .iter()
        .map(|c| c.time)
        .find(|t| (t - spec.at).abs() <= 1e-9 * spec.at.abs().max(1.0))
        .unwrap_or(spec.at);
    let n_references = corpus
        .articles
        .iter()
        .filter(|a| a.published == cohort_time)
        .map(|a| a.reference_ages.len())
        .sum();

    let summary = AgeStatsOutput {
        at: spec.at,
        mean_age: stats.mean_age,
        median_age: stats.median_age,
        n_references,
    };
    let json = serde_json::to_string_pretty(&summary)?;
    std::fs::write(out_dir.join("agestats.json"), json + "\n")?;

    let file = std::fs::File::create(out_dir.join("survival.csv"))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(["age", "fraction_at_least"])
        .map_err(|e| CliError::data(e.to_string()))?;
    for (age, fraction) in survival {
        w.write_record([age.to_string(), fraction.to_string()])
            .map_err(|e| CliError::data(e.to_string()))?;
    }
    w.flush()?;

    Ok(vec![
        "agestats.json".to_string(),
        "survival.csv".to_string(),
    ])
}
