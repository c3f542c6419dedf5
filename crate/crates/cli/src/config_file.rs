//! Plain `key = value` configuration files.
//!
//! Recognized keys mirror the physical-configuration fields plus the sweep
//! grid; unknown keys are rejected so typos do not silently fall back to
//! defaults. Lines starting with `#` and blank lines are ignored.
//!
//! ```text
//! # device constants
//! bin_spacing_hz       = 7e9
//! group_index_s        = 2.68
//! group_index_as       = 3.76
//! acoustic_velocity    = 5e3
//! interaction_length_m = 0.1
//! ambient_bins         = 64
//! window_offset        = auto
//!
//! # sweep grid
//! grid_min_m   = 1e-4
//! grid_max_m   = 1.0
//! grid_points  = 200
//! ```

use frodo_core::PhysicalConfig;

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub min_m: f64,
    pub max_m: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            min_m: 1e-4,
            max_m: 1.0,
            points: 200,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct FileConfig {
    pub physical: PhysicalConfig,
    pub grid: GridSpec,
}

pub fn parse(text: &str, origin: &str) -> Result<FileConfig> {
    let mut config = FileConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Validation(format!(
                "{origin}:{}: expected 'key = value', got '{line}'",
                lineno + 1
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| {
            CliError::Validation(format!(
                "{origin}:{}: {key} must be {what}, got '{value}'",
                lineno + 1
            ))
        };
        match key {
            "bin_spacing_hz" => {
                config.physical.bin_spacing_hz = value.parse().map_err(|_| bad("a number"))?
            }
            "group_index_s" => {
                config.physical.group_index_s = value.parse().map_err(|_| bad("a number"))?
            }
            "group_index_as" => {
                config.physical.group_index_as = value.parse().map_err(|_| bad("a number"))?
            }
            "acoustic_velocity" => {
                config.physical.acoustic_velocity = value.parse().map_err(|_| bad("a number"))?
            }
            "interaction_length_m" => {
                config.physical.interaction_length_m =
                    value.parse().map_err(|_| bad("a number"))?
            }
            "ambient_bins" => {
                config.physical.ambient_bins = value.parse().map_err(|_| bad("an integer"))?
            }
            "window_offset" => {
                config.physical.window_offset = if value == "auto" {
                    None
                } else {
                    Some(value.parse().map_err(|_| bad("an integer or 'auto'"))?)
                }
            }
            "grid_min_m" => config.grid.min_m = value.parse().map_err(|_| bad("a number"))?,
            "grid_max_m" => config.grid.max_m = value.parse().map_err(|_| bad("a number"))?,
            "grid_points" => config.grid.points = value.parse().map_err(|_| bad("an integer"))?,
            other => {
                return Err(CliError::Validation(format!(
                    "{origin}:{}: unknown key '{other}'",
                    lineno + 1
                )))
            }
        }
    }
    config
        .physical
        .validate()
        .map_err(|e| CliError::Validation(format!("{origin}: {e}")))?;
    Ok(config)
}

pub fn load(path: &std::path::Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path.display().to_string()))?;
    parse(&text, &path.display().to_string())
}
