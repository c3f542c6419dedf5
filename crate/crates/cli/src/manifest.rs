//! Run manifests: everything needed to reproduce an output file bit for bit
//! (same seed, same toolkit version), plus bookkeeping that does not affect
//! reproducibility (wall-clock duration, warnings).

use frodo_core::{PhysicalConfig, RNG_ALGORITHM};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::config_file::GridSpec;
use crate::error::{CliError, Result};

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub toolkit_version: String,
    pub seed: u64,
    pub rng: String,
    pub config: PhysicalConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridJson>,
    pub parameters: serde_json::Value,
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
    pub duration_seconds: f64,
}

#[derive(Serialize)]
pub struct GridJson {
    pub min_m: f64,
    pub max_m: f64,
    pub points: usize,
}

impl From<GridSpec> for GridJson {
    fn from(g: GridSpec) -> Self {
        Self {
            min_m: g.min_m,
            max_m: g.max_m,
            points: g.points,
        }
    }
}

/// Collects outputs and warnings for one command invocation and writes the
/// manifest last.
pub struct RunRecorder {
    out_dir: PathBuf,
    manifest: RunManifest,
    started: Instant,
}

impl RunRecorder {
    pub fn new(
        command: &str,
        out_dir: &Path,
        seed: u64,
        config: &PhysicalConfig,
        grid: Option<GridSpec>,
        parameters: serde_json::Value,
    ) -> Result<Self> {
        std::fs::create_dir_all(out_dir).map_err(CliError::io(out_dir.display().to_string()))?;
        Ok(Self {
            out_dir: out_dir.to_path_buf(),
            manifest: RunManifest {
                command: command.to_string(),
                toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
                seed,
                rng: RNG_ALGORITHM.to_string(),
                config: config.clone(),
                grid: grid.map(GridJson::from),
                parameters,
                outputs: Vec::new(),
                warnings: Vec::new(),
                duration_seconds: 0.0,
            },
            started: Instant::now(),
        })
    }

    pub fn warn(&mut self, message: String) {
        eprintln!("warning: {message}");
        self.manifest.warnings.push(message);
    }

    pub fn write_text(&mut self, name: &str, content: &str) -> Result<PathBuf> {
        let path = self.out_dir.join(name);
        std::fs::write(&path, content).map_err(CliError::io(path.display().to_string()))?;
        self.manifest.outputs.push(path.display().to_string());
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Validation(format!("serialization failed: {e}")))?;
        self.write_text(name, &(text + "\n"))
    }

    /// Write the manifest and report the produced files on stdout.
    pub fn finish(mut self) -> Result<()> {
        self.manifest.duration_seconds = self.started.elapsed().as_secs_f64();
        let path = self.out_dir.join("manifest.json");
        let text = serde_json::to_string_pretty(&self.manifest)
            .map_err(|e| CliError::Validation(format!("manifest serialization failed: {e}")))?;
        std::fs::write(&path, text + "\n")
            .map_err(CliError::io(path.display().to_string()))?;
        for output in &self.manifest.outputs {
            println!("wrote {output}");
        }
        println!("wrote {}", path.display());
        Ok(())
    }
}
