//! Target gate specifications and the matrix JSON interchange format.
//!
//! A target is given as `dft:N`, `haar:N` (seeded from the global seed),
//! `haar:N:SEED` with an explicit seed, `identity:N`, or `@path.json`
//! pointing at a serialized matrix document.

use frodo_core::num_complex::Complex64;
use frodo_core::{dft_matrix, haar_random_unitary, ComplexMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Serialized dense complex matrix: row-major `[re, im]` pairs.
#[derive(Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.rows(),
            entries: m.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn into_matrix(self) -> Result<ComplexMatrix> {
        let data = self
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(self.dim, self.dim, data).map_err(CliError::from)
    }
}

/// A parsed target: the matrix plus a short description for manifests.
pub struct Target {
    pub matrix: ComplexMatrix,
    pub description: String,
}

pub fn parse_target(spec: &str, default_seed: u64) -> Result<Target> {
    if let Some(path) = spec.strip_prefix('@') {
        let text =
            std::fs::read_to_string(path).map_err(CliError::io(path.to_string()))?;
        let json: MatrixJson = serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("{path}: {e}")))?;
        let matrix = json.into_matrix()?;
        matrix
            .require_unitary(1e-8)
            .map_err(|e| CliError::Validation(format!("{path}: {e}")))?;
        return Ok(Target {
            matrix,
            description: format!("file:{path}"),
        });
    }

    let mut parts = spec.split(':');
    let kind = parts.next().unwrap_or_default();
    let dim: usize = parts
        .next()
        .ok_or_else(|| bad_spec(spec))?
        .parse()
        .map_err(|_| bad_spec(spec))?;
    let extra = parts.next();
    if parts.next().is_some() {
        return Err(bad_spec(spec));
    }

    match (kind, extra) {
        ("dft", None) => Ok(Target {
            matrix: dft_matrix(dim)?,
            description: format!("dft:{dim}"),
        }),
        ("identity", None) => Ok(Target {
            matrix: ComplexMatrix::identity(dim),
            description: format!("identity:{dim}"),
        }),
        ("haar", maybe_seed) => {
            let seed = match maybe_seed {
                Some(s) => s.parse().map_err(|_| bad_spec(spec))?,
                None => default_seed,
            };
            Ok(Target {
                matrix: haar_random_unitary(dim, seed)?,
                description: format!("haar:{dim}:{seed}"),
            })
        }
        _ => Err(bad_spec(spec)),
    }
}

fn bad_spec(spec: &str) -> CliError {
    CliError::Validation(format!(
        "invalid target '{spec}': expected dft:N, haar:N[:SEED], identity:N, or @file.json"
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_builtin_targets() {
        assert_eq!(parse_target("dft:4", 1).unwrap().matrix.rows(), 4);
        assert_eq!(parse_target("identity:3", 1).unwrap().description, "identity:3");
        let a = parse_target("haar:5", 9).unwrap();
        let b = parse_target("haar:5:9", 1).unwrap();
        assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn rejects_malformed_specs() {
        assert!(parse_target("dft", 1).is_err());
        assert!(parse_target("dft:abc", 1).is_err());
        assert!(parse_target("pauli:2", 1).is_err());
        assert!(parse_target("dft:2:3", 1).is_err());
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = haar_random_unitary(3, 4).unwrap();
        let text = serde_json::to_string(&MatrixJson::from_matrix(&m)).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_matrix().unwrap(), m);
    }
}
