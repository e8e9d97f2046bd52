//! Declarative configuration: growth curves, kernels and simulation runs
//! described in TOML, plus two-column CSV loading for tabulated curves.
//!
//! A config file can hold any of the `[growth]`, `[kernel]` and
//! `[simulation]` tables:
//!
//! ```toml
//! [growth]
//! variant = "polynomial"
//! t0 = 2006.0
//! coefficients = [0.0, 0.0, 34.7]
//!
//! [kernel]
//! variant = "constant"
//! q = 0.002
//!
//! [simulation]
//! t_end = 2018.0
//! dt = 1.0
//! seed = 42
//! replications = 50
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CitabilityKernel, GrowthCurve};
use crate::montecarlo::{SamplingMode, SimulationConfig};

/// Serializable description of a growth curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum GrowthSpec {
    Linear {
        rate: f64,
        start_count: f64,
        t0: f64,
    },
    Polynomial {
        coefficients: Vec<f64>,
        t0: f64,
    },
    Exponential {
        scale: f64,
        growth_rate: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t0: Option<f64>,
    },
    Tabulated {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<Vec<(f64, f64)>>,
        /// Path to a two-column CSV of (year, cumulative_count), resolved
        /// relative to the config file when not absolute.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        csv: Option<PathBuf>,
    },
}

impl GrowthSpec {
    /// Builds the runtime curve, resolving any CSV path against `base_dir`.
    pub fn build(&self, base_dir: &Path) -> Result<GrowthCurve> {
        match self {
            Self::Linear {
                rate,
                start_count,
                t0,
            } => GrowthCurve::linear(*rate, *start_count, *t0),
            Self::Polynomial { coefficients, t0 } => {
                GrowthCurve::polynomial(coefficients.clone(), *t0)
            }
            Self::Exponential {
                scale,
                growth_rate,
                t0,
            } => GrowthCurve::exponential(*scale, *growth_rate, *t0),
            Self::Tabulated { points, csv } => match (points, csv) {
                (Some(points), None) => GrowthCurve::tabulated(points.clone()),
                (None, Some(path)) => {
                    GrowthCurve::tabulated(read_two_column_csv(&resolve(base_dir, path))?)
                }
                _ => Err(Error::Config(
                    "tabulated growth needs exactly one of `points` or `csv`".into(),
                )),
            },
        }
    }
}

/// Serializable description of a citability kernel.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    Constant {
        q: f64,
    },
    ExponentialDecay {
        q0: f64,
        decay_rate: f64,
    },
    Tabulated {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<Vec<(f64, f64)>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        csv: Option<PathBuf>,
    },
}

impl KernelSpec {
    pub fn build(&self, base_dir: &Path) -> Result<CitabilityKernel> {
        match self {
            Self::Constant { q } => CitabilityKernel::constant(*q),
            Self::ExponentialDecay { q0, decay_rate } => {
                CitabilityKernel::exponential_decay(*q0, *decay_rate)
            }
            Self::Tabulated { points, csv } => match (points, csv) {
                (Some(points), None) => CitabilityKernel::tabulated(points.clone()),
                (None, Some(path)) => {
                    CitabilityKernel::tabulated(read_two_column_csv(&resolve(base_dir, path))?)
                }
                _ => Err(Error::Config(
                    "tabulated kernel needs exactly one of `points` or `csv`".into(),
                )),
            },
        }
    }
}

/// Scalar settings of a simulation run; combined with a growth spec and a
/// kernel spec this fully determines a [`SimulationConfig`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSettings {
    /// Start of the window; defaults to the growth curve's origin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    pub t_end: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub sampling_mode: SamplingMode,
    #[serde(default = "default_replications")]
    pub replications: u32,
    #[serde(default = "default_max_pairs")]
    pub max_pairs: u64,
}

fn default_dt() -> f64 {
    1.0
}

fn default_replications() -> u32 {
    1
}

fn default_max_pairs() -> u64 {
    100_000_000
}

/// Full simulation description as stored in config files and manifests.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationSpec {
    pub growth: GrowthSpec,
    pub kernel: KernelSpec,
    #[serde(flatten)]
    pub settings: SimulationSettings,
}

impl SimulationSpec {
    pub fn build(&self, base_dir: &Path) -> Result<SimulationConfig> {
        let growth = self.growth.build(base_dir)?;
        let kernel = self.kernel.build(base_dir)?;
        let t0 = match self.settings.t0 {
            Some(t0) => t0,
            None => growth.origin().ok_or_else(|| {
                Error::Config(
                    "simulation.t0 is required when the growth curve has infinite history".into(),
                )
            })?,
        };
        Ok(SimulationConfig {
            growth,
            kernel,
            t0,
            t_end: self.settings.t_end,
            dt: self.settings.dt,
            seed: self.settings.seed,
            sampling_mode: self.settings.sampling_mode,
            replications: self.settings.replications,
            max_pairs: self.settings.max_pairs,
        })
    }
}

/// Top-level layout of a TOML config file.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSettings>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn require_growth(&self, path: &Path) -> Result<&GrowthSpec> {
        self.growth
            .as_ref()
            .ok_or_else(|| Error::Config(format!("{} has no [growth] table", path.display())))
    }

    pub fn require_kernel(&self, path: &Path) -> Result<&KernelSpec> {
        self.kernel
            .as_ref()
            .ok_or_else(|| Error::Config(format!("{} has no [kernel] table", path.display())))
    }
}

fn resolve(base_dir: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base_dir.join(path)
    }
}

/// Reads a two-column numeric CSV (e.g. year, cumulative_count). A single
/// leading non-numeric row is treated as a header.
pub fn read_two_column_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(&e))?;
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(&e))?;
        let line = record.position().map(|p| p.line());
        if record.len() < 2 {
            return Err(Error::Csv {
                line,
                message: format!("expected two columns, found {}", record.len()),
            });
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        match parsed {
            (Ok(a), Ok(b)) => rows.push((a, b)),
            _ if idx == 0 => continue, // header row
            _ => {
                return Err(Error::Csv {
                    line,
                    message: format!("unparseable numeric row: {:?}", record),
                })
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput(format!(
            "{} holds no numeric rows",
            path.display()
        )));
    }
    Ok(rows)
}

pub(crate) fn csv_error(e: &csv::Error) -> Error {
    Error::Csv {
        line: e.position().map(|p| p.line()),
        message: e.to_string(),
    }
}
