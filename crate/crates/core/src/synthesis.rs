//! Mapping mesh plans onto FRODO cascades: compose the layer matrices over
//! the ambient ladder, project onto the computational window, and score the
//! result.
//!
//! Composition order is fixed by the plan convention: the first block of the
//! plan acts first on the input state, i.e. it is the rightmost matrix
//! factor; the final diagonal phase layer acts last, on the computational
//! bins only.

use crate::clements::{self, MeshPlan};
use crate::error::{Error, Result};
use crate::frodo::{kappa, CompiledLayer, PhysicalConfig};
use crate::matrix::ComplexMatrix;
use crate::metrics::GateMetrics;
use num_complex::Complex64;

/// Outcome of synthesizing one plan under one physical configuration.
#[derive(Clone, Debug)]
pub struct SynthesisResult {
    /// The N x N computational subblock W.
    pub projected: ComplexMatrix,
    /// The full M x M ladder transformation.
    pub full: ComplexMatrix,
    /// Scores of `projected` against the target.
    pub metrics: GateMetrics,
    pub config_echo: PhysicalConfig,
    pub plan_echo: MeshPlan,
}

/// Physical realization of a plan: per-layer phase-shifter settings plus the
/// compensated output phase layer.
///
/// A layer's phase shifter acts on one whole transverse mode, so every bin
/// sharing the parity of the targeted pair's lower bin picks up the phase,
/// not just the pair itself. Those mode-wide phases are deterministic, so
/// each shifter is set to make the *net* phase seen by its target pair equal
/// the plan's phi_p, and the residue left on each computational bin is
/// subtracted from the final diagonal layer. The bookkeeping follows the
/// phase-matched limit, where non-target rungs are exactly diagonal: a bin's
/// ledger grows with each same-parity shifter firing and collapses to its
/// partner's value when its own pair mixes. In that limit the cascade then
/// reproduces the ideal mesh exactly; at finite mismatch what remains is the
/// genuine detuned-rung physics.
struct PhysicalCascade {
    layers: Vec<CompiledLayer>,
    output_phases: Vec<f64>,
}

fn compile_cascade(plan: &MeshPlan, config: &PhysicalConfig, w: usize) -> Result<PhysicalCascade> {
    let k = kappa(config);
    let m_total = config.ambient_bins;
    let mut ledger = vec![0.0f64; m_total];
    let mut layers = Vec::with_capacity(plan.blocks().len());
    for b in plan.blocks() {
        let low = w + b.pair_low;
        let shifter = b.phi - ledger[low] + ledger[low + 1];
        layers.push(CompiledLayer::new(low, b.theta, shifter, k, m_total)?);
        let parity = low % 2;
        for (bin, lambda) in ledger.iter_mut().enumerate() {
            if bin % 2 == parity {
                *lambda += shifter;
            }
        }
        ledger[low] = ledger[low + 1];
    }
    let output_phases = plan
        .final_phases()
        .iter()
        .enumerate()
        .map(|(j, &d)| d - ledger[w + j])
        .collect();
    Ok(PhysicalCascade { layers, output_phases })
}

fn apply_output_phases(cascade: &PhysicalCascade, w: usize, mat: &mut ComplexMatrix) {
    for (j, &phase) in cascade.output_phases.iter().enumerate() {
        let factor = Complex64::from_polar(1.0, phase);
        for z in mat.row_mut(w + j) {
            *z *= factor;
        }
    }
}

fn check_dims(plan: &MeshPlan, config: &PhysicalConfig, target: &ComplexMatrix) -> Result<usize> {
    config.validate()?;
    let n = target.square_dim()?;
    if plan.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: plan.dim(),
            got: n,
        });
    }
    config.resolved_window_offset(n)
}

/// Run the full cascade and score it against `target`.
pub fn synthesize(
    plan: &MeshPlan,
    config: &PhysicalConfig,
    target: &ComplexMatrix,
) -> Result<SynthesisResult> {
    let w = check_dims(plan, config, target)?;
    let n = plan.dim();
    let cascade = compile_cascade(plan, config, w)?;

    let mut full = ComplexMatrix::identity(config.ambient_bins);
    for layer in &cascade.layers {
        layer.apply_to(&mut full);
    }
    apply_output_phases(&cascade, w, &mut full);

    let projected = full.subblock(w, w, n);
    let metrics = GateMetrics::measure(target, &projected)?;
    Ok(SynthesisResult {
        projected,
        full,
        metrics,
        config_echo: config.clone(),
        plan_echo: plan.clone(),
    })
}

/// The computational subblock W alone, via basis-column propagation.
///
/// Entrywise identical to `synthesize(...).projected` (same compiled layers,
/// same arithmetic per column) at a fraction of the cost; sweeps, ensembles,
/// and the optimizer inner loop all sit on this path.
pub fn synthesize_projected(
    plan: &MeshPlan,
    config: &PhysicalConfig,
    gate_dim: usize,
) -> Result<ComplexMatrix> {
    config.validate()?;
    if plan.dim() != gate_dim {
        return Err(Error::DimensionMismatch {
            expected: plan.dim(),
            got: gate_dim,
        });
    }
    let w = config.resolved_window_offset(gate_dim)?;
    let cascade = compile_cascade(plan, config, w)?;

    let mut cols = ComplexMatrix::zeros(config.ambient_bins, gate_dim);
    for j in 0..gate_dim {
        cols[(w + j, j)] = Complex64::new(1.0, 0.0);
    }
    for layer in &cascade.layers {
        layer.apply_to(&mut cols);
    }
    apply_output_phases(&cascade, w, &mut cols);
    Ok(cols.subblock(w, 0, gate_dim))
}

/// Metrics of the projected gate against `target`, fast path.
pub fn synthesize_metrics(
    plan: &MeshPlan,
    config: &PhysicalConfig,
    target: &ComplexMatrix,
) -> Result<GateMetrics> {
    let n = target.square_dim()?;
    let w = synthesize_projected(plan, config, n)?;
    GateMetrics::measure(target, &w)
}

/// Decompose once, then re-synthesize and score the target at each length.
pub fn sweep_lengths(
    target: &ComplexMatrix,
    config_base: &PhysicalConfig,
    lengths: &[f64],
) -> Result<Vec<(f64, GateMetrics)>> {
    if lengths.is_empty() {
        return Err(Error::InvalidParameter("length grid is empty".into()));
    }
    if lengths.iter().any(|l| !l.is_finite() || *l <= 0.0) {
        return Err(Error::InvalidParameter(
            "lengths must be positive and finite".into(),
        ));
    }
    let plan = clements::decompose(target)?;
    lengths
        .iter()
        .map(|&l| {
            let metrics = synthesize_metrics(&plan, &config_base.with_length(l), target)?;
            Ok((l, metrics))
        })
        .collect()
}

/// Threshold of a metric-versus-length curve: the smallest sampled L after
/// which the metric never dips below `target_value`; `None` when the final
/// sample is already below it. The curve must be sorted by L.
pub fn threshold_length(curve: &[(f64, f64)], target_value: f64) -> Result<Option<f64>> {
    if curve.is_empty() {
        return Err(Error::InvalidParameter("threshold curve is empty".into()));
    }
    let mut threshold = None;
    for &(l, value) in curve.iter().rev() {
        if value >= target_value {
            threshold = Some(l);
        } else {
            break;
        }
    }
    Ok(threshold)
}

/// Log-spaced grid of `points` lengths over [min, max], endpoints included.
pub fn log_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite()) || min <= 0.0 || max < min {
        return Err(Error::InvalidParameter(
            "grid bounds must satisfy 0 < min <= max".into(),
        ));
    }
    if points == 0 {
        return Err(Error::InvalidParameter("grid needs at least one point".into()));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    let (lo, hi) = (min.ln(), max.ln());
    Ok((0..points)
        .map(|i| {
            if i == 0 {
                min
            } else if i == points - 1 {
                max
            } else {
                (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect())
}
