//! Gate performance metrics: fidelity, success probability, and the
//! Bhattacharyya uniformity coefficient.
//!
//! The synthesized matrix W is in general a non-unitary subblock of a larger
//! unitary, so fidelity is normalized by Tr(W†W) and the retained probability
//! is reported separately:
//!
//!   F   = |Tr(V†W)|^2 / (N * Tr(W†W))     (global-phase blind)
//!   P   = Tr(W†W) / N
//!   B_c = N^(-3/2) * sum_ij |W_ij|        (phase blind entirely)

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Scores for one synthesized gate at one parameter point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateMetrics {
    pub fidelity: f64,
    pub success_prob: f64,
    pub uniformity: f64,
}

impl GateMetrics {
    /// Score `synthesized` against `target`.
    pub fn measure(target: &ComplexMatrix, synthesized: &ComplexMatrix) -> Result<Self> {
        Ok(Self {
            fidelity: fidelity(target, synthesized)?,
            success_prob: success_probability(synthesized)?,
            uniformity: uniformity_bc(synthesized)?,
        })
    }
}

/// Gate fidelity |Tr(V†W)|^2 / (N * Tr(W†W)).
///
/// Equals 1 exactly when W is proportional to V; invariant under a global
/// phase on W. W need not be unitary but must be nonzero.
pub fn fidelity(target: &ComplexMatrix, synthesized: &ComplexMatrix) -> Result<f64> {
    let n = target.square_dim()?;
    let m = synthesized.square_dim()?;
    if n != m {
        return Err(Error::DimensionMismatch { expected: n, got: m });
    }
    let w_power = synthesized.frobenius_sq();
    if w_power == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let overlap = target.hs_inner(synthesized);
    Ok(overlap.norm_sqr() / (n as f64 * w_power))
}

/// Success probability Tr(W†W)/N, the fraction of probability kept inside
/// the computational bins when W is a subblock of a unitary.
pub fn success_probability(synthesized: &ComplexMatrix) -> Result<f64> {
    let n = synthesized.square_dim()?;
    Ok(synthesized.frobenius_sq() / n as f64)
}

/// Bhattacharyya uniformity B_c = N^(-3/2) * sum_ij |W_ij|.
///
/// Reaches 1 exactly when every modulus equals 1/sqrt(N), the profile of an
/// ideal balanced mixer.
pub fn uniformity_bc(synthesized: &ComplexMatrix) -> Result<f64> {
    let n = synthesized.square_dim()?;
    let total: f64 = synthesized.entries().iter().map(|z| z.norm()).sum();
    Ok(total / (n as f64).powf(1.5))
}
