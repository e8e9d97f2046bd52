//! Run manifests: every subcommand drops a `manifest.json` next to its
//! outputs holding the fully resolved spec, so `refgrowth rerun` can
//! reproduce the run without the original flags or config files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::errors::{CliError, CliResult};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub toolkit_version: String,
    pub timestamp: String,
    /// Fully resolved, self-contained parameters of the run.
    pub spec: serde_json::Value,
    /// Data files written alongside this manifest.
    pub outputs: Vec<String>,
}

pub fn write<S: Serialize>(
    out_dir: &Path,
    command: &str,
    spec: &S,
    outputs: &[String],
) -> CliResult<()> {
    let manifest = RunManifest {
        command: command.to_string(),
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: chrono::Utc::now().to_rfc3339(),
        spec: serde_json::to_value(spec)?,
        outputs: outputs.to_vec(),
    };
    let text = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(out_dir.join(MANIFEST_FILE), text + "\n")?;
    Ok(())
}

pub fn load(path: &Path) -> CliResult<RunManifest> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read manifest {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("invalid manifest {}: {e}", path.display())))
}
