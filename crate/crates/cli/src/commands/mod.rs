//! Subcommand implementations. Each command resolves its flags and config
//! files into a self-contained serializable spec, executes the spec into an
//! output directory, and records a manifest. `rerun` replays a stored spec.

pub mod agestats;
pub mod distfit;
pub mod fit;
pub mod harvest;
pub mod ingest;
pub mod predict;
pub mod rerun;
pub mod simulate;

use std::path::{Path, PathBuf};

use refgrowth::config::{GrowthSpec, KernelSpec};
use refgrowth::model::{CitabilityKernel, GrowthCurve};

use crate::errors::{CliError, CliResult};
use crate::manifest;

/// Creates the output directory and runs `execute`, then writes the
/// manifest listing the produced files.
pub fn run_into<S: serde::Serialize>(
    command: &str,
    spec: &S,
    out_dir: &Path,
    execute: impl FnOnce(&Path) -> CliResult<Vec<String>>,
) -> CliResult<()> {
    std::fs::create_dir_all(out_dir)?;
    let outputs = execute(out_dir)?;
    manifest::write(out_dir, command, spec, &outputs)?;
    Ok(())
}

/// Absolute form of a user-supplied path, so specs stored in manifests stay
/// valid when replayed from another working directory.
pub fn absolutize(path: &Path) -> CliResult<PathBuf> {
    if path.is_absolute() {
        return Ok(path.to_path_buf());
    }
    Ok(std::env::current_dir()?.join(path))
}

pub fn base_dir_of(config_path: &Path) -> PathBuf {
    config_path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(|p| p.to_path_buf())
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Concrete spec for a curve that is already built: tabulated data is
/// embedded as points, never as a file reference, so manifests are
/// self-contained.
pub fn spec_from_curve(curve: &GrowthCurve) -> GrowthSpec {
    match curve {
        GrowthCurve::Linear {
            rate,
            start_count,
            origin,
        } => GrowthSpec::Linear {
            rate: *rate,
            start_count: *start_count,
            t0: *origin,
        },
        GrowthCurve::Polynomial {
            coefficients,
            origin,
        } => GrowthSpec::Polynomial {
            coefficients: coefficients.clone(),
            t0: *origin,
        },
        GrowthCurve::Exponential {
            scale,
            growth_rate,
            origin,
        } => GrowthSpec::Exponential {
            scale: *scale,
            growth_rate: *growth_rate,
            t0: *origin,
        },
        GrowthCurve::Tabulated { points } => GrowthSpec::Tabulated {
            points: Some(points.clone()),
            csv: None,
        },
    }
}

pub fn spec_from_kernel(kernel: &CitabilityKernel) -> KernelSpec {
    match kernel {
        CitabilityKernel::Constant { probability } => KernelSpec::Constant { q: *probability },
        CitabilityKernel::ExponentialDecay {
            initial,
            decay_rate,
        } => KernelSpec::ExponentialDecay {
            q0: *initial,
            decay_rate: *decay_rate,
        },
        CitabilityKernel::Tabulated { points } => KernelSpec::Tabulated {
            points: Some(points.clone()),
            csv: None,
        },
    }
}

/// Integer years from a two-column (year, value) series; fractional years
/// are rejected.
pub fn integer_year_series(rows: &[(f64, f64)]) -> CliResult<Vec<(i32, f64)>> {
    rows.iter()
        .map(|&(year, value)| {
            if year.fract() != 0.0 {
                return Err(CliError::data(format!(
                    "year {year} is not an integer year"
                )));
            }
            Ok((year as i32, value))
        })
        .collect()
}
