//! One module per subcommand; each resolves its inputs, runs the study
//! through `frodo-core`, and records outputs plus a manifest.

pub mod dft_study;
pub mod ensemble;
pub mod parallel_hadamard;
pub mod plans;
pub mod sweep;

use frodo_core::PhysicalConfig;
use std::path::PathBuf;

use crate::config_file::GridSpec;
use crate::error::{CliError, Result};

/// Inputs shared by every subcommand after flag/config-file resolution.
pub struct Ctx {
    pub config: PhysicalConfig,
    pub grid: GridSpec,
    pub seed: u64,
    pub out_dir: PathBuf,
}

impl Ctx {
    pub fn grid_lengths(&self) -> Result<Vec<f64>> {
        frodo_core::log_grid(self.grid.min_m, self.grid.max_m, self.grid.points)
            .map_err(CliError::from)
    }
}

/// Parse "2..10" (inclusive) or a comma list like "3,5,7".
pub fn parse_dims(spec: &str) -> Result<Vec<usize>> {
    let bad = || CliError::Validation(format!("invalid dimension list '{spec}'"));
    let dims: Vec<usize> = if let Some((lo, hi)) = spec.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        (lo..=hi).collect()
    } else {
        spec.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(CliError::Validation(format!(
            "dimension list '{spec}' must contain values >= 2"
        )));
    }
    Ok(dims)
}

pub fn parse_float_list(spec: &str, what: &str) -> Result<Vec<f64>> {
    let values: Vec<f64> = spec
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Validation(format!("invalid {what} list '{spec}'")))
        })
        .collect::<Result<_>>()?;
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Validation(format!(
            "{what} list '{spec}' must be nonempty and finite"
        )));
    }
    Ok(values)
}
