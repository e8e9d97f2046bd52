//! Command-line front end for the reference-list growth toolkit.
//!
//! Every subcommand writes its data files plus a `manifest.json` into the
//! directory given by `--out`; `rerun` replays a manifest. Failures are
//! printed as `error[<category>]: <message>` with exit codes: 2 config,
//! 3 io, 4 numeric, 5 network, 6 data-quality.

mod commands;
mod errors;
mod manifest;

use clap::{Parser, Subcommand};

use commands::{agestats, distfit, fit, harvest, ingest, predict, rerun, simulate};
use errors::CliResult;

#[derive(Debug, Parser)]
#[command(
    name = "refgrowth",
    version,
    about = "Simulate, predict and fit reference-list growth in scholarly literatures",
    after_help = "Option precedence: command-line flags override config-file values, \
                  which override built-in defaults."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate model predictions (expected length, age statistics) per year.
    Predict(predict::PredictArgs),
    /// Draw a synthetic corpus from the Bernoulli citation process.
    Simulate(simulate::SimulateArgs),
    /// Empirical reference-age statistics for one cohort of a corpus.
    Agestats(agestats::AgeStatsArgs),
    /// Least-squares fits of yearly aggregates and production series.
    Fit(fit::FitArgs),
    /// Binomial goodness-of-fit for a length histogram.
    Distfit(distfit::DistfitArgs),
    /// Filter an article CSV and aggregate it by year and field.
    Ingest(ingest::IngestArgs),
    /// Fetch reference counts per DOI from a CrossRef-style endpoint.
    Harvest(harvest::HarvestArgs),
    /// Replay a previous run from its manifest.
    Rerun(rerun::RerunArgs),
}

fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Predict(args) => predict::run(args),
        Command::Simulate(args) => simulate::run(args),
        Command::Agestats(args) => agestats::run(args),
        Command::Fit(args) => fit::run(args),
        Command::Distfit(args) => distfit::run(args),
        Command::Ingest(args) => ingest::run(args),
        Command::Harvest(args) => harvest::run(args),
        Command::Rerun(args) => rerun::run(args),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = dispatch(cli.command) {
        eprintln!("error[{}]: {}", err.category.as_str(), err.message);
        std::process::exit(err.category.exit_code());
    }
}
