//! Length sweep for a single target gate.

use frodo_core::{kappa, sweep_lengths};
use serde_json::json;

use super::Ctx;
use crate::error::Result;
use crate::manifest::RunRecorder;
use crate::output::{csv_document, fmt};
use crate::targets::parse_target;

pub fn run(ctx: &Ctx, target_spec: &str) -> Result<()> {
    let target = parse_target(target_spec, ctx.seed)?;
    let lengths = ctx.grid_lengths()?;
    let curve = sweep_lengths(&target.matrix, &ctx.config, &lengths)?;

    let mut recorder = RunRecorder::new(
        "sweep",
        &ctx.out_dir,
        ctx.seed,
        &ctx.config,
        Some(ctx.grid),
        json!({ "target": target.description }),
    )?;
    let doc = csv_document(
        &["L_m", "kappa", "fidelity", "success_prob", "uniformity"],
        curve.iter().map(|(l, m)| {
            vec![
                fmt(*l),
                fmt(kappa(&ctx.config.with_length(*l))),
                fmt(m.fidelity),
                fmt(m.success_prob),
                fmt(m.uniformity),
            ]
        }),
    );
    recorder.write_text("sweep.csv", &doc)?;
    recorder.finish()
}
