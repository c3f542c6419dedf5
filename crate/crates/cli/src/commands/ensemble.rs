//! Haar-random ensemble study: per-sample metrics across the length grid,
//! plus per-length percentile summaries for external density plots.

use frodo_core::{clements, haar_random_unitary, kappa, synthesize_metrics, GateMetrics};
use rayon::prelude::*;
use serde_json::json;

use super::Ctx;
use crate::error::{CliError, Result};
use crate::manifest::RunRecorder;
use crate::output::{csv_document, fmt, percentile};

pub fn run(ctx: &Ctx, dim: usize, samples: usize) -> Result<()> {
    if dim < 2 {
        return Err(CliError::Validation("ensemble dimension must be >= 2".into()));
    }
    if samples == 0 {
        return Err(CliError::Validation("at least one sample is required".into()));
    }
    let lengths = ctx.grid_lengths()?;
    ctx.config.validate().map_err(CliError::from)?;
    ctx.config
        .resolved_window_offset(dim)
        .map_err(CliError::from)?;

    let mut recorder = RunRecorder::new(
        "ensemble",
        &ctx.out_dir,
        ctx.seed,
        &ctx.config,
        Some(ctx.grid),
        json!({ "dim": dim, "samples": samples }),
    )?;

    // Sample s draws from seed + s, independent of worker scheduling.
    let per_sample: Vec<Vec<GateMetrics>> = (0..samples)
        .into_par_iter()
        .map(|s| -> Result<Vec<GateMetrics>> {
            let target = haar_random_unitary(dim, ctx.seed.wrapping_add(s as u64))?;
            let plan = clements::decompose(&target)?;
            lengths
                .iter()
                .map(|&l| {
                    synthesize_metrics(&plan, &ctx.config.with_length(l), &target)
                        .map_err(CliError::from)
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let records = csv_document(
        &["sample", "L_m", "kappa", "fidelity", "success_prob", "uniformity"],
        per_sample.iter().enumerate().flat_map(|(s, row)| {
            let lengths = &lengths;
            let config = &ctx.config;
            row.iter().zip(lengths.iter()).map(move |(m, &l)| {
                vec![
                    s.to_string(),
                    fmt(l),
                    fmt(kappa(&config.with_length(l))),
                    fmt(m.fidelity),
                    fmt(m.success_prob),
                    fmt(m.uniformity),
                ]
            })
        }),
    );
    recorder.write_text("ensemble_records.csv", &records)?;

    let summary = csv_document(
        &[
            "L_m",
            "kappa",
            "fidelity_p05",
            "fidelity_median",
            "fidelity_p95",
            "success_p05",
            "success_median",
            "success_p95",
            "uniformity_p05",
            "uniformity_median",
            "uniformity_p95",
        ],
        lengths.iter().enumerate().map(|(i, &l)| {
            let f: Vec<f64> = per_sample.iter().map(|r| r[i].fidelity).collect();
            let p: Vec<f64> = per_sample.iter().map(|r| r[i].success_prob).collect();
            let b: Vec<f64> = per_sample.iter().map(|r| r[i].uniformity).collect();
            let mut row = vec![fmt(l), fmt(kappa(&ctx.config.with_length(l)))];
            for series in [&f, &p, &b] {
                row.push(fmt(percentile(series, 0.05)));
                row.push(fmt(percentile(series, 0.5)));
                row.push(fmt(percentile(series, 0.95)));
            }
            row
        }),
    );
    recorder.write_text("ensemble_summary.csv", &summary)?;
    recorder.finish()
}
