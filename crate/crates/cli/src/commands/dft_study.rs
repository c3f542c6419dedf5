//! DFT threshold study: fidelity and uniformity versus interaction length
//! for a range of dimensions, with optional local optimization of per-layer
//! settings, and extraction of the interaction-length thresholds for each
//! requested level.

use frodo_core::{
    clements, dft_matrix, kappa, optimize, synthesize_metrics, threshold_length, CostKind,
    GateMetrics, OptimizationProblem, StopReason,
};
use rayon::prelude::*;
use serde_json::json;

use super::Ctx;
use crate::error::{CliError, Result};
use crate::manifest::RunRecorder;
use crate::output::{csv_document, fmt};

pub struct StudyOptions {
    pub dims: Vec<usize>,
    pub optimize: bool,
    pub levels: Vec<f64>,
    pub budget: usize,
}

struct CurvePoint {
    n: usize,
    length: f64,
    variant: &'static str,
    metrics: GateMetrics,
    exhausted: bool,
}

type MetricPick = fn(&GateMetrics) -> f64;

pub fn run(ctx: &Ctx, opts: &StudyOptions) -> Result<()> {
    if opts.levels.is_empty() || opts.levels.iter().any(|l| !(0.0 < *l && *l < 1.0)) {
        return Err(CliError::Validation(
            "threshold levels must lie strictly between 0 and 1".into(),
        ));
    }
    let lengths = ctx.grid_lengths()?;
    ctx.config.validate().map_err(CliError::from)?;

    // Early-exit level for the optimizer: halfway between the strictest
    // requested level and 1, so early-stopped points still certify every
    // requested threshold. The fidelity cost bounds F from below at this
    // level for any success probability <= 1.
    let max_level = opts.levels.iter().cloned().fold(0.0, f64::max);
    let stop_level = 0.5 * (1.0 + max_level);
    let stop_cost_fidelity = -stop_level * (1.0 - stop_level).log10().powi(2);
    let stop_cost_uniformity = -stop_level;

    let mut points: Vec<CurvePoint> = Vec::new();
    let mut recorder = RunRecorder::new(
        "dft-study",
        &ctx.out_dir,
        ctx.seed,
        &ctx.config,
        Some(ctx.grid),
        json!({
            "dims": opts.dims,
            "optimize": opts.optimize,
            "levels": opts.levels,
            "budget": opts.budget,
            "optimizer_stop_level": if opts.optimize { Some(stop_level) } else { None },
        }),
    )?;

    for &n in &opts.dims {
        let target = dft_matrix(n)?;
        let plan = clements::decompose(&target)?;

        for &l in &lengths {
            let metrics = synthesize_metrics(&plan, &ctx.config.with_length(l), &target)?;
            points.push(CurvePoint {
                n,
                length: l,
                variant: "analytic",
                metrics,
                exhausted: false,
            });
        }

        if opts.optimize {
            let tasks: Vec<(f64, CostKind)> = lengths
                .iter()
                .flat_map(|&l| [(l, CostKind::Fidelity), (l, CostKind::Uniformity)])
                .collect();
            let optimized: Vec<(f64, CostKind, GateMetrics, bool)> = tasks
                .par_iter()
                .map(|&(l, kind)| -> Result<_> {
                    let stop = match kind {
                        CostKind::Fidelity => stop_cost_fidelity,
                        CostKind::Uniformity => stop_cost_uniformity,
                    };
                    let problem = OptimizationProblem::new(
                        target.clone(),
                        ctx.config.with_length(l),
                        plan.clone(),
                        kind,
                    )
                    .with_budget(opts.budget)
                    .with_stop_below_cost(stop);
                    let out = optimize(&problem)?;
                    Ok((
                        l,
                        kind,
                        out.result.metrics,
                        out.stop == StopReason::BudgetExhausted,
                    ))
                })
                .collect::<Result<_>>()?;

            for (l, kind, metrics, exhausted) in optimized {
                if exhausted {
                    recorder.warn(format!(
                        "optimizer budget exhausted at n={n}, L={l:.4e} m ({kind:?} cost); keeping best found"
                    ));
                }
                points.push(CurvePoint {
                    n,
                    length: l,
                    variant: match kind {
                        CostKind::Fidelity => "optimized_fidelity",
                        CostKind::Uniformity => "optimized_uniformity",
                    },
                    metrics,
                    exhausted,
                });
            }
        }
    }

    // Threshold extraction per (n, variant, metric, level).
    let mut threshold_rows: Vec<Vec<String>> = Vec::new();
    let curve_of = |n: usize, variant: &str, pick: MetricPick| -> Vec<(f64, f64)> {
        let mut c: Vec<(f64, f64)> = points
            .iter()
            .filter(|p| p.n == n && p.variant == variant)
            .map(|p| (p.length, pick(&p.metrics)))
            .collect();
        c.sort_by(|a, b| a.0.total_cmp(&b.0));
        c
    };
    for &n in &opts.dims {
        let mut variants: Vec<(&str, &str, MetricPick)> = vec![
            ("analytic", "fidelity", |m| m.fidelity),
            ("analytic", "success_prob", |m| m.success_prob),
            ("analytic", "uniformity", |m| m.uniformity),
        ];
        if opts.optimize {
            variants.push(("optimized_fidelity", "fidelity", |m| m.fidelity));
            variants.push(("optimized_uniformity", "uniformity", |m| m.uniformity));
        }
        for (variant, metric, pick) in variants {
            let curve = curve_of(n, variant, pick);
            for &level in &opts.levels {
                let th = threshold_length(&curve, level)?;
                threshold_rows.push(vec![
                    n.to_string(),
                    variant.to_string(),
                    metric.to_string(),
                    fmt(level),
                    th.map(fmt).unwrap_or_default(),
                ]);
            }
        }
    }

    // High fidelity must come with high success probability at every point.
    let footnote_violations = points
        .iter()
        .filter(|p| p.metrics.fidelity >= 0.99 && p.metrics.success_prob <= 0.99)
        .count();
    if footnote_violations > 0 {
        recorder.warn(format!(
            "{footnote_violations} study points have fidelity >= 0.99 but success probability <= 0.99"
        ));
    }

    let curves = csv_document(
        &["n", "L_m", "kappa", "variant", "fidelity", "success_prob", "uniformity"],
        points.iter().map(|p| {
            vec![
                p.n.to_string(),
                fmt(p.length),
                fmt(kappa(&ctx.config.with_length(p.length))),
                p.variant.to_string(),
                fmt(p.metrics.fidelity),
                fmt(p.metrics.success_prob),
                fmt(p.metrics.uniformity),
            ]
        }),
    );
    recorder.write_text("dft_curves.csv", &curves)?;

    let thresholds = csv_document(
        &["n", "variant", "metric", "level", "threshold_L_m"],
        threshold_rows,
    );
    recorder.write_text("dft_thresholds.csv", &thresholds)?;

    let exhausted_total = points.iter().filter(|p| p.exhausted).count();
    println!(
        "dft-study: {} points, {} budget-exhausted, {} footnote violations",
        points.len(),
        exhausted_total,
        footnote_violations
    );
    recorder.finish()
}
