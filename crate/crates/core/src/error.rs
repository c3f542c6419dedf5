//! Error type shared by all toolkit modules.

use thiserror::Error;

/// Errors returned by matrix utilities, decomposition, synthesis, and the
/// numerical oracles.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("entry count {got} does not match shape {rows}x{cols}")]
    BadEntryCount { rows: usize, cols: usize, got: usize },

    #[error("matrix dimension must be positive")]
    EmptyMatrix,

    #[error("matrix is identically zero")]
    ZeroMatrix,

    #[error("matrix is not unitary (max deviation {deviation:.3e} exceeds {tolerance:.1e})")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("bin pair ({low}, {high}) out of range for dimension {dim}")]
    PairOutOfRange { low: usize, high: usize, dim: usize },

    #[error("invalid physical configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integration did not converge: step-halving changed entries by {delta:.3e} (limit {limit:.1e})")]
    NonConvergence { delta: f64, limit: f64 },

    #[error("plan serialization failed: {0}")]
    PlanFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
