//! Synthesis and simulation of frequency-bin unitaries built from cascaded
//! acousto-optic FRODO (frequency/transverse-mode operation) layers.
//!
//! The toolkit covers the full pipeline:
//!
//! - [`clements`]: factor any N x N unitary into a rectangular mesh of
//!   nearest-neighbor two-bin rotations plus a final diagonal phase layer,
//!   and rebuild unitaries from plans (the ideal-limit inverse).
//! - [`frodo`]: the physics of a single acousto-optic segment — the 2x2
//!   transfer matrix at arbitrary phase mismatch, the block-diagonal layer
//!   it induces across the whole frequency-bin ladder, and an independent
//!   ODE-integration oracle for the transfer matrix.
//! - [`synthesis`]: map a mesh plan onto a cascade of layers under a device
//!   configuration, project onto the computational bins, score the result,
//!   and sweep interaction lengths.
//! - [`optimizer`]: derivative-free local refinement of per-layer settings
//!   at finite mismatch, seeded by the analytic angles.
//! - [`gates`] / [`metrics`]: standard targets (DFT, Haar-random unitaries)
//!   and the three performance metrics (fidelity, success probability,
//!   amplitude uniformity).
//!
//! Everything is a pure function of immutable inputs; random number
//! generators are passed explicitly (or derived from explicit seeds), so any
//! of it can run on concurrent workers without coordination.

pub use num_complex;

pub mod clements;
pub mod error;
pub mod frodo;
pub mod gates;
pub mod matrix;
pub mod metrics;
pub mod optimizer;
pub mod synthesis;

pub use clements::{decompose, reconstruct, MeshPlan, RotationBlock};
pub use error::{Error, Result};
pub use frodo::{
    frodo_block, kappa, layer_matrix, ode_oracle, FrodoBlockParams, PhysicalConfig,
    DEFAULT_ODE_STEPS,
};
pub use gates::{dft_matrix, haar_random_unitary, RNG_ALGORITHM};
pub use matrix::ComplexMatrix;
pub use metrics::{fidelity, success_probability, uniformity_bc, GateMetrics};
pub use optimizer::{
    cost, cost_value, optimize, CostKind, Method, OptimizationOutcome, OptimizationProblem,
    StopReason, TraceRow,
};
pub use synthesis::{
    log_grid, sweep_lengths, synthesize, synthesize_metrics, synthesize_projected,
    threshold_length, SynthesisResult,
};
