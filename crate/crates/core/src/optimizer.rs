//! Local refinement of per-layer settings at finite phase mismatch.
//!
//! The mesh angles coming out of the analytic decomposition are exact only
//! in the large-mismatch limit; at finite mismatch a derivative-free local
//! search over all (theta_p, phi_p) and the final phases can buy back
//! substantial interaction length. The search is strictly local (no
//! restarts), seeded with the analytic angles, and never returns anything
//! worse than its seed.

use serde::{Deserialize, Serialize};

use crate::clements::MeshPlan;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::metrics::GateMetrics;
use crate::frodo::PhysicalConfig;
use crate::synthesis::{synthesize, synthesize_metrics, SynthesisResult};

/// Floor applied to 1 - F inside the fidelity cost so the logarithm stays
/// finite; below double-precision resolution anyway.
pub const FIDELITY_GAP_FLOOR: f64 = 1e-15;

/// Which cost function drives the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostKind {
    /// C = -P * [log10(1 - F)]^2
    Fidelity,
    /// C = -B_c
    Uniformity,
}

/// Search strategy. The simplex search is the default; cyclic coordinate
/// descent is provided as a fallback for landscapes where the simplex
/// collapses early.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    NelderMead,
    CoordinateDescent,
}

/// Cost of a metric point under the given kind.
pub fn cost_value(metrics: &GateMetrics, kind: CostKind) -> f64 {
    match kind {
        CostKind::Fidelity => {
            let gap = (1.0 - metrics.fidelity).max(FIDELITY_GAP_FLOOR);
            -metrics.success_prob * gap.log10().powi(2)
        }
        CostKind::Uniformity => -metrics.uniformity,
    }
}

/// Cost of a finished synthesis.
pub fn cost(result: &SynthesisResult, kind: CostKind) -> f64 {
    cost_value(&result.metrics, kind)
}

/// One local-refinement task.
#[derive(Clone, Debug)]
pub struct OptimizationProblem {
    pub target: ComplexMatrix,
    pub config: PhysicalConfig,
    pub initial_plan: MeshPlan,
    pub cost_kind: CostKind,
    /// Maximum number of cost evaluations.
    pub budget: usize,
    /// Convergence threshold on the cost spread.
    pub tolerance: f64,
    pub method: Method,
    /// Optional early exit once the best cost drops to this level; used by
    /// threshold studies that only need to know a level is reachable.
    pub stop_below_cost: Option<f64>,
}

impl OptimizationProblem {
    pub fn new(
        target: ComplexMatrix,
        config: PhysicalConfig,
        initial_plan: MeshPlan,
        cost_kind: CostKind,
    ) -> Self {
        Self {
            target,
            config,
            initial_plan,
            cost_kind,
            budget: 20_000,
            tolerance: 1e-10,
            method: Method::NelderMead,
            stop_below_cost: None,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_stop_below_cost(mut self, level: f64) -> Self {
        self.stop_below_cost = Some(level);
        self
    }
}

/// Why the search stopped. Budget exhaustion is reported distinctly so
/// callers can warn without failing a whole run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    BudgetExhausted,
    TargetReached,
}

/// Best cost over time; one row per improvement.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TraceRow {
    /// Evaluation count at which this best was found.
    pub iteration: usize,
    pub cost: f64,
    pub fidelity: f64,
    pub success_prob: f64,
    pub uniformity: f64,
}

#[derive(Clone, Debug)]
pub struct OptimizationOutcome {
    pub plan: MeshPlan,
    pub result: SynthesisResult,
    pub trace: Vec<TraceRow>,
    pub stop: StopReason,
    pub evaluations: usize,
    pub initial_cost: f64,
    pub final_cost: f64,
}

/// Flat parameter vector layout: [t_1..t_P, phi_1..phi_P, d_1..d_N] with
/// theta_p = |t_p| so drive amplitudes stay nonnegative without constraints.
struct Objective<'a> {
    problem: &'a OptimizationProblem,
    block_count: usize,
    evals: usize,
    best_cost: f64,
    best_x: Vec<f64>,
    trace: Vec<TraceRow>,
}

impl<'a> Objective<'a> {
    fn new(problem: &'a OptimizationProblem) -> Self {
        let block_count = problem.initial_plan.blocks().len();
        Self {
            problem,
            block_count,
            evals: 0,
            best_cost: f64::INFINITY,
            best_x: Vec::new(),
            trace: Vec::new(),
        }
    }

    fn seed(&self) -> Vec<f64> {
        let plan = &self.problem.initial_plan;
        let mut x = Vec::with_capacity(2 * self.block_count + plan.dim());
        x.extend(plan.blocks().iter().map(|b| b.theta));
        x.extend(plan.blocks().iter().map(|b| b.phi));
        x.extend(plan.final_phases().iter().copied());
        x
    }

    fn plan_from(&self, x: &[f64]) -> Result<MeshPlan> {
        let p = self.block_count;
        let thetas: Vec<f64> = x[..p].iter().map(|t| t.abs()).collect();
        let phis = &x[p..2 * p];
        let finals = &x[2 * p..];
        self.problem.initial_plan.with_angles(&thetas, phis, finals)
    }

    fn eval(&mut self, x: &[f64]) -> f64 {
        if x.iter().any(|v| !v.is_finite()) {
            return f64::INFINITY;
        }
        let plan = match self.plan_from(x) {
            Ok(p) => p,
            Err(_) => return f64::INFINITY,
        };
        let metrics = match synthesize_metrics(&plan, &self.problem.config, &self.problem.target) {
            Ok(m) => m,
            Err(_) => return f64::INFINITY,
        };
        self.evals += 1;
        let c = cost_value(&metrics, self.problem.cost_kind);
        if c < self.best_cost {
            self.best_cost = c;
            self.best_x = x.to_vec();
            self.trace.push(TraceRow {
                iteration: self.evals,
                cost: c,
                fidelity: metrics.fidelity,
                success_prob: metrics.success_prob,
                uniformity: metrics.uniformity,
            });
        }
        c
    }

    fn budget_left(&self) -> bool {
        self.evals < self.problem.budget
    }

    fn target_hit(&self) -> bool {
        self.problem
            .stop_below_cost
            .is_some_and(|level| self.best_cost <= level)
    }
}

/// Refine the plan; the returned plan never scores worse than the seed.
pub fn optimize(problem: &OptimizationProblem) -> Result<OptimizationOutcome> {
    if problem.budget == 0 {
        return Err(Error::InvalidParameter("budget must be at least 1".into()));
    }
    if problem.tolerance.is_nan() || problem.tolerance <= 0.0 {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    problem.config.validate()?;
    let n = problem.target.square_dim()?;
    if problem.initial_plan.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: problem.initial_plan.dim(),
            got: n,
        });
    }

    let mut objective = Objective::new(problem);
    let x0 = objective.seed();
    let initial_cost = objective.eval(&x0);
    if !initial_cost.is_finite() {
        return Err(Error::InvalidParameter(
            "initial plan does not evaluate to a finite cost".into(),
        ));
    }

    let stop = if objective.target_hit() {
        StopReason::TargetReached
    } else {
        match problem.method {
            Method::NelderMead => nelder_mead(&mut objective, &x0),
            Method::CoordinateDescent => coordinate_descent(&mut objective, &x0),
        }
    };

    let plan = objective.plan_from(&objective.best_x)?;
    let result = synthesize(&plan, &problem.config, &problem.target)?;
    let final_cost = objective.best_cost;
    debug_assert!(final_cost <= initial_cost + 1e-12);
    Ok(OptimizationOutcome {
        plan,
        result,
        trace: objective.trace,
        stop,
        evaluations: objective.evals,
        initial_cost,
        final_cost,
    })
}

/// Downhill simplex with the dimension-adaptive coefficients of Gao & Han,
/// which keep expansion/contraction sensible in the ~100-dimensional spaces
/// a ten-bin mesh produces.
fn nelder_mead(objective: &mut Objective, x0: &[f64]) -> StopReason {
    let dim = x0.len();
    let nf = dim as f64;
    let alpha = 1.0;
    let gamma = 1.0 + 2.0 / nf;
    let rho = 0.75 - 1.0 / (2.0 * nf);
    let sigma = 1.0 - 1.0 / nf;
    const INITIAL_STEP: f64 = 0.15;

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    let mut values: Vec<f64> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    values.push(objective.best_cost);
    for i in 0..dim {
        if !objective.budget_left() {
            return StopReason::BudgetExhausted;
        }
        let mut v = x0.to_vec();
        v[i] += INITIAL_STEP;
        let f = objective.eval(&v);
        simplex.push(v);
        values.push(f);
        if objective.target_hit() {
            return StopReason::TargetReached;
        }
    }

    loop {
        if objective.target_hit() {
            return StopReason::TargetReached;
        }
        if !objective.budget_left() {
            return StopReason::BudgetExhausted;
        }

        let mut order: Vec<usize> = (0..simplex.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];

        if values[worst] - values[best] <= objective.problem.tolerance {
            return StopReason::Converged;
        }

        // centroid of all but the worst vertex
        let mut centroid = vec![0.0; dim];
        for &idx in &order[..dim] {
            for (c, x) in centroid.iter_mut().zip(simplex[idx].iter()) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let mix = |coeff: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(simplex[worst].iter())
                .map(|(c, w)| c + coeff * (c - w))
                .collect()
        };

        let reflected = mix(alpha);
        let f_reflected = objective.eval(&reflected);

        if f_reflected < values[best] {
            if objective.budget_left() {
                let expanded = mix(gamma);
                let f_expanded = objective.eval(&expanded);
                if f_expanded < f_reflected {
                    simplex[worst] = expanded;
                    values[worst] = f_expanded;
                    continue;
                }
            }
            simplex[worst] = reflected;
            values[worst] = f_reflected;
        } else if f_reflected < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
        } else {
            if !objective.budget_left() {
                return StopReason::BudgetExhausted;
            }
            let contracted = if f_reflected < values[worst] {
                mix(rho)
            } else {
                mix(-rho)
            };
            let f_contracted = objective.eval(&contracted);
            if f_contracted < values[worst].min(f_reflected) {
                simplex[worst] = contracted;
                values[worst] = f_contracted;
            } else {
                // shrink toward the best vertex
                let best_point = simplex[best].clone();
                for idx in 0..simplex.len() {
                    if idx == best {
                        continue;
                    }
                    if !objective.budget_left() {
                        return StopReason::BudgetExhausted;
                    }
                    let shrunk: Vec<f64> = best_point
                        .iter()
                        .zip(simplex[idx].iter())
                        .map(|(b, x)| b + sigma * (x - b))
                        .collect();
                    values[idx] = objective.eval(&shrunk);
                    simplex[idx] = shrunk;
                    if objective.target_hit() {
                        return StopReason::TargetReached;
                    }
                }
            }
        }
    }
}

/// Cyclic coordinate descent with a golden-section line search per
/// coordinate; the search span shrinks between sweeps.
fn coordinate_descent(objective: &mut Objective, x0: &[f64]) -> StopReason {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    let dim = x0.len();
    let mut x = x0.to_vec();
    let mut fx = objective.best_cost;
    let mut span = std::f64::consts::FRAC_PI_2;

    loop {
        let sweep_start_cost = fx;
        for i in 0..dim {
            if objective.target_hit() {
                return StopReason::TargetReached;
            }
            if !objective.budget_left() {
                return StopReason::BudgetExhausted;
            }
            let center = x[i];
            let mut lo = center - span;
            let mut hi = center + span;
            let mut m1 = hi - GOLDEN * (hi - lo);
            let mut m2 = lo + GOLDEN * (hi - lo);
            let eval_at = |obj: &mut Objective, x: &mut Vec<f64>, i: usize, v: f64| -> f64 {
                let saved = x[i];
                x[i] = v;
                let f = obj.eval(x);
                x[i] = saved;
                f
            };
            let mut f1 = eval_at(objective, &mut x, i, m1);
            let mut f2 = eval_at(objective, &mut x, i, m2);
            for _ in 0..12 {
                if !objective.budget_left() {
                    break;
                }
                if f1 <= f2 {
                    hi = m2;
                    m2 = m1;
                    f2 = f1;
                    m1 = hi - GOLDEN * (hi - lo);
                    f1 = eval_at(objective, &mut x, i, m1);
                } else {
                    lo = m1;
                    m1 = m2;
                    f1 = f2;
                    m2 = lo + GOLDEN * (hi - lo);
                    f2 = eval_at(objective, &mut x, i, m2);
                }
            }
            let (cand, f_cand) = if f1 <= f2 { (m1, f1) } else { (m2, f2) };
            if f_cand < fx {
                x[i] = cand;
                fx = f_cand;
            }
        }
        if sweep_start_cost - fx <= objective.problem.tolerance {
            return StopReason::Converged;
        }
        span = (span * 0.5).max(1e-4);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clements::decompose;
    use crate::frodo::SPEED_OF_LIGHT;
    use crate::gates::dft_matrix;
    use crate::synthesis::{log_grid, sweep_lengths};

    fn config_with_kappa(k: f64) -> PhysicalConfig {
        let base = PhysicalConfig::default();
        let delta_inv = (base.group_index_as - base.group_index_s) / SPEED_OF_LIGHT;
        let length = k / (2.0 * std::f64::consts::TAU * base.bin_spacing_hz * delta_inv);
        base.with_length(length)
    }

    #[test]
    fn cost_formula_spot_values() {
        let m = GateMetrics {
            fidelity: 0.99,
            success_prob: 1.0,
            uniformity: 0.9,
        };
        assert!((cost_value(&m, CostKind::Fidelity) + 4.0).abs() < 1e-9);

        let m2 = GateMetrics {
            fidelity: 0.999,
            success_prob: 0.5,
            uniformity: 0.9,
        };
        assert!((cost_value(&m2, CostKind::Fidelity) + 4.5).abs() < 1e-9);

        let m3 = GateMetrics {
            fidelity: 0.5,
            success_prob: 0.5,
            uniformity: 1.0,
        };
        assert!((cost_value(&m3, CostKind::Uniformity) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn cost_floor_handles_perfect_fidelity() {
        let m = GateMetrics {
            fidelity: 1.0,
            success_prob: 1.0,
            uniformity: 1.0,
        };
        let c = cost_value(&m, CostKind::Fidelity);
        assert!((c + 225.0).abs() < 1e-9); // log10(1e-15)^2 = 225
    }

    #[test]
    fn seeded_optimum_stays_put() {
        let target = dft_matrix(4).unwrap();
        let plan = decompose(&target).unwrap();
        let problem = OptimizationProblem::new(
            target,
            config_with_kappa(1e11),
            plan,
            CostKind::Uniformity,
        )
        .with_budget(400)
        .with_tolerance(1e-9);
        let out = optimize(&problem).unwrap();
        assert!(out.final_cost <= out.initial_cost + 1e-12);
        assert!((out.final_cost - out.initial_cost).abs() <= 1e-9);
    }

    #[test]
    fn trace_is_monotone_and_final_never_worse() {
        let target = dft_matrix(4).unwrap();
        let plan = decompose(&target).unwrap();
        let problem = OptimizationProblem::new(
            target,
            config_with_kappa(8.0),
            plan,
            CostKind::Fidelity,
        )
        .with_budget(600);
        let out = optimize(&problem).unwrap();
        assert!(out.final_cost <= out.initial_cost + 1e-12);
        for pair in out.trace.windows(2) {
            assert!(pair[1].cost <= pair[0].cost);
            assert!(pair[1].iteration > pair[0].iteration);
        }
        for b in out.plan.blocks() {
            assert!(b.theta >= 0.0);
        }
    }

    #[test]
    fn tiny_budget_reports_exhaustion() {
        let target = dft_matrix(3).unwrap();
        let plan = decompose(&target).unwrap();
        let problem = OptimizationProblem::new(
            target,
            config_with_kappa(5.0),
            plan,
            CostKind::Fidelity,
        )
        .with_budget(10);
        let out = optimize(&problem).unwrap();
        assert_eq!(out.stop, StopReason::BudgetExhausted);
        assert!(out.evaluations <= 10);
    }

    #[test]
    fn early_stop_reports_target_reached() {
        let target = dft_matrix(3).unwrap();
        let plan = decompose(&target).unwrap();
        let problem = OptimizationProblem::new(
            target,
            config_with_kappa(1e6),
            plan,
            CostKind::Uniformity,
        )
        .with_stop_below_cost(-0.5);
        let out = optimize(&problem).unwrap();
        assert_eq!(out.stop, StopReason::TargetReached);
        assert_eq!(out.evaluations, 1); // seed already beats the level
    }

    #[test]
    fn optimize_rejects_invalid_problems() {
        let target = dft_matrix(3).unwrap();
        let plan = decompose(&target).unwrap();
        let bad_budget =
            OptimizationProblem::new(target.clone(), PhysicalConfig::default(), plan.clone(), CostKind::Fidelity)
                .with_budget(0);
        assert!(optimize(&bad_budget).is_err());

        let wrong_dim = OptimizationProblem::new(
            dft_matrix(4).unwrap(),
            PhysicalConfig::default(),
            plan,
            CostKind::Fidelity,
        );
        assert!(optimize(&wrong_dim).is_err());
    }

    #[test]
    fn improves_dft_fidelity_at_marginal_lengths() {
        // At the length where the analytic fidelity first clears 0.9 there
        // is real headroom; the local search must find some of it.
        for n in [4usize, 6, 8, 10] {
            let target = dft_matrix(n).unwrap();
            let config = PhysicalConfig::default();
            let grid = log_grid(1e-3, 1.0, 40).unwrap();
            let curve = sweep_lengths(&target, &config, &grid).unwrap();
            let (length, analytic) = curve
                .iter()
                .find(|(_, m)| m.fidelity > 0.9)
                .map(|(l, m)| (*l, m.fidelity))
                .expect("analytic fidelity must cross 0.9 somewhere on the grid");

            let plan = decompose(&target).unwrap();
            let problem = OptimizationProblem::new(
                target,
                config.with_length(length),
                plan,
                CostKind::Fidelity,
            )
            .with_budget(4_000);
            let out = optimize(&problem).unwrap();
            assert!(
                out.result.metrics.fidelity > analytic,
                "n={n}: optimized {:.6} vs analytic {analytic:.6}",
                out.result.metrics.fidelity
            );
        }
    }
}
