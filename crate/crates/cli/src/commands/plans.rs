//! Plan-centric subcommands: decompose a target, synthesize a plan at one
//! length, and locally optimize per-layer settings.

use frodo_core::{
    clements, kappa, optimize, synthesize, CostKind, MeshPlan, Method, OptimizationProblem,
    StopReason,
};
use serde_json::json;
use std::path::Path;

use super::Ctx;
use crate::error::{CliError, Result};
use crate::manifest::RunRecorder;
use crate::output::{csv_document, fmt};
use crate::targets::{parse_target, MatrixJson};

pub fn decompose(ctx: &Ctx, target_spec: &str) -> Result<()> {
    let target = parse_target(target_spec, ctx.seed)?;
    let plan = clements::decompose(&target.matrix)?;
    let mut recorder = RunRecorder::new(
        "decompose",
        &ctx.out_dir,
        ctx.seed,
        &ctx.config,
        None,
        json!({ "target": target.description, "blocks": plan.blocks().len() }),
    )?;
    recorder.write_text("plan.json", &(plan.to_json() + "\n"))?;
    recorder.finish()
}

fn load_plan(path: &Path) -> Result<MeshPlan> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path.display().to_string()))?;
    MeshPlan::from_json(&text).map_err(CliError::from)
}

pub fn synthesize_cmd(
    ctx: &Ctx,
    target_spec: &str,
    plan_path: Option<&Path>,
    length: Option<f64>,
) -> Result<()> {
    let target = parse_target(target_spec, ctx.seed)?;
    let plan = match plan_path {
        Some(p) => load_plan(p)?,
        None => clements::decompose(&target.matrix)?,
    };
    let config = match length {
        Some(l) => ctx.config.with_length(l),
        None => ctx.config.clone(),
    };
    let result = synthesize(&plan, &config, &target.matrix)?;

    let mut recorder = RunRecorder::new(
        "synthesize",
        &ctx.out_dir,
        ctx.seed,
        &config,
        None,
        json!({
            "target": target.description,
            "plan": plan_path.map(|p| p.display().to_string()),
        }),
    )?;
    let report = json!({
        "target": target.description,
        "length_m": config.interaction_length_m,
        "kappa": kappa(&config),
        "window_offset": config.resolved_window_offset(plan.dim()).map_err(CliError::from)?,
        "metrics": result.metrics,
        "projected": MatrixJson::from_matrix(&result.projected),
    });
    recorder.write_json("synthesis.json", &report)?;
    recorder.finish()
}

#[allow(clippy::too_many_arguments)]
pub fn optimize_cmd(
    ctx: &Ctx,
    target_spec: &str,
    length: Option<f64>,
    cost_kind: CostKind,
    budget: usize,
    method: Method,
    stop_below_cost: Option<f64>,
) -> Result<()> {
    let target = parse_target(target_spec, ctx.seed)?;
    let plan = clements::decompose(&target.matrix)?;
    let config = match length {
        Some(l) => ctx.config.with_length(l),
        None => ctx.config.clone(),
    };
    let mut problem =
        OptimizationProblem::new(target.matrix.clone(), config.clone(), plan, cost_kind)
            .with_budget(budget)
            .with_method(method);
    if let Some(level) = stop_below_cost {
        problem = problem.with_stop_below_cost(level);
    }
    let out = optimize(&problem)?;

    let mut recorder = RunRecorder::new(
        "optimize",
        &ctx.out_dir,
        ctx.seed,
        &config,
        None,
        json!({
            "target": target.description,
            "cost": cost_kind,
            "method": method,
            "budget": budget,
            "stop_below_cost": stop_below_cost,
            "initial_cost": out.initial_cost,
            "final_cost": out.final_cost,
            "evaluations": out.evaluations,
            "stop_reason": out.stop,
            "metrics": out.result.metrics,
        }),
    )?;
    if out.stop == StopReason::BudgetExhausted {
        recorder.warn(format!(
            "optimizer budget of {budget} evaluations exhausted; keeping best found"
        ));
    }
    recorder.write_text("optimized_plan.json", &(out.plan.to_json() + "\n"))?;
    let trace = csv_document(
        &["iteration", "cost", "fidelity", "success_prob", "uniformity"],
        out.trace.iter().map(|row| {
            vec![
                row.iteration.to_string(),
                fmt(row.cost),
                fmt(row.fidelity),
                fmt(row.success_prob),
                fmt(row.uniformity),
            ]
        }),
    );
    recorder.write_text("trace.csv", &trace)?;
    recorder.finish()
}
