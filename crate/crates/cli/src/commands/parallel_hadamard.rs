//! Parallel frequency-Hadamard study: per-rung fidelity and leakage of a
//! half-angle FRODO across the ladder, as a function of the dimensionless
//! mismatch.

use frodo_core::{fidelity, frodo_block, FrodoBlockParams};
use serde_json::json;
use std::f64::consts::FRAC_PI_4;

use super::{parse_float_list, Ctx};
use crate::error::{CliError, Result};
use crate::manifest::RunRecorder;
use crate::output::{csv_document, fmt};

pub fn run(ctx: &Ctx, kappas_spec: &str, rung_max: i64) -> Result<()> {
    let kappas = parse_float_list(kappas_spec, "kappa")?;
    if kappas.iter().any(|&k| k < 0.0) {
        return Err(CliError::Validation("kappa values must be nonnegative".into()));
    }
    if rung_max < 0 {
        return Err(CliError::Validation("rung-max must be nonnegative".into()));
    }

    let ideal = frodo_block(&FrodoBlockParams::new(FRAC_PI_4, 0.0, 0.0)?);
    let mut rows = Vec::new();
    for &k in &kappas {
        for ell in -rung_max..=rung_max {
            let block = frodo_block(&FrodoBlockParams::new(FRAC_PI_4, 0.0, k * ell as f64)?);
            let f = fidelity(&ideal, &block)?;
            let leakage = block[(0, 1)].norm();
            rows.push(vec![fmt(k), ell.to_string(), fmt(f), fmt(leakage)]);
        }
    }

    let mut recorder = RunRecorder::new(
        "parallel-hadamard",
        &ctx.out_dir,
        ctx.seed,
        &ctx.config,
        None,
        json!({ "kappas": kappas, "rung_max": rung_max, "theta": FRAC_PI_4, "phi": 0.0 }),
    )?;
    let doc = csv_document(&["kappa", "ell", "fidelity", "leakage"], rows);
    recorder.write_text("parallel_hadamard.csv", &doc)?;
    recorder.finish()
}
