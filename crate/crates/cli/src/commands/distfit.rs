//! `distfit`: binomial goodness-of-fit for a reference-list length
//! histogram.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use refgrowth::config::read_two_column_csv;
use refgrowth::inference::{fit_binomial, BinomialFit, LengthHistogram};

use super::{absolutize, integer_year_series, run_into};
use crate::errors::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct DistfitArgs {
    /// Histogram CSV with columns length,count.
    #[arg(long, value_name = "FILE")]
    pub hist: PathBuf,
    /// Trial count: an integer, or a (year, cumulative_count) CSV looked up
    /// at --year.
    #[arg(long, value_name = "INT|FILE")]
    pub ntrials: String,
    /// Publication year of the histogram; used for the ntrials lookup.
    #[arg(long, default_value_t = 0)]
    pub year: i32,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DistfitSpec {
    pub hist_csv: PathBuf,
    pub n_trials: u64,
    pub year: i32,
}

#[derive(Debug, Serialize)]
struct DistfitOutput<'a> {
    year: i32,
    n_trials: u64,
    total_articles: u64,
    #[serde(flatten)]
    fit: &'a BinomialFit,
}

pub fn run(args: DistfitArgs) -> CliResult<()> {
    let n_trials = match args.ntrials.parse::<u64>() {
        Ok(n) => n,
        Err(_) => {
            // Treat the argument as a production-series CSV.
            let path = absolutize(Path::new(&args.ntrials))?;
            let series = integer_year_series(&read_two_column_csv(&path)?)?;
            let value = series
                .iter()
                .find(|&&(year, _)| year == args.year)
                .map(|&(_, v)| v)
                .ok_or_else(|| {
                    CliError::data(format!(
                        "{} has no row for year {}",
                        path.display(),
                        args.year
                    ))
                })?;
            if value < 1.0 {
                return Err(CliError::data(format!(
                    "production count {value} at year {} is not a usable trial count",
                    args.year
                )));
            }
            value.round() as u64
        }
    };
    let spec = DistfitSpec {
        hist_csv: absolutize(&args.hist)?,
        n_trials,
        year: args.year,
    };
    run_into("distfit", &spec, &args.out, |dir| execute(&spec, dir))
}

pub fn read_histogram_csv(path: &Path, year: i32) -> CliResult<LengthHistogram> {
    let file = std::fs::File::open(path).map_err(CliError::from)?;
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers = r.headers().map_err(|e| CliError::data(e.to_string()))?;
    if headers.iter().collect::<Vec<_>>() != ["length", "count"] {
        return Err(CliError::data(format!(
            "histogram CSV header must be [\"length\", \"count\"], found {:?}",
            headers.iter().collect::<Vec<_>>()
        )));
    }
    let mut hist = LengthHistogram::new(year);
    for record in r.records() {
        let record = record.map_err(|e| CliError::data(e.to_string()))?;
        let length: u64 = record[0]
            .parse()
            .map_err(|_| CliError::data(format!("unparseable length {:?}", &record[0])))?;
        let count: u64 = record[1]
            .parse()
            .map_err(|_| CliError::data(format!("unparseable count {:?}", &record[1])))?;
        if count > 0 {
            *hist.counts.entry(length).or_insert(0) += count;
        }
    }
    Ok(hist)
}

pub fn execute(spec: &DistfitSpec, out_dir: &Path) -> CliResult<Vec<String>> {
    let hist = read_histogram_csv(&spec.hist_csv, spec.year)?;
    let fit = fit_binomial(&hist, spec.n_trials)?;
    let output = DistfitOutput {
        year: spec.year,
        n_trials: spec.n_trials,
        total_articles: hist.total(),
        fit: &fit,
    };
    let json = serde_json::to_string_pretty(&output)?;
    std::fs::write(out_dir.join("distfit.json"), json + "\n")?;
    Ok(vec!["distfit.json".to_string()])
}
