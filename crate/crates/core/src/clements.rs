//! Rectangular mesh decomposition of N x N unitaries into nearest-neighbor
//! two-bin rotations plus a final diagonal phase layer, and the inverse
//! (ideal-limit) reconstruction.
//!
//! The rotation convention is fixed once for the whole toolkit:
//!
//! ```text
//! U_p(theta, phi) = [ e^{i phi} cos(theta)   -sin(theta) ]
//!                   [ e^{i phi} sin(theta)    cos(theta) ]
//! ```
//!
//! acting on bins (m, m+1). A plan lists its blocks in the order they act on
//! the input state (first block = rightmost matrix factor), ended by a
//! diagonal phase layer at the output.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Unitarity tolerance accepted by `decompose`.
pub const DECOMPOSE_UNITARY_TOL: f64 = 1e-8;

/// Marker recorded in serialized plans so the composition convention cannot
/// silently drift between producers and consumers.
pub const BLOCK_ORDER: &str = "first_block_acts_first";

/// One two-bin rotation of the mesh.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationBlock {
    /// Lower bin of the coupled nearest-neighbor pair (m, m+1).
    pub pair_low: usize,
    /// Mixing angle in [0, pi/2] after canonicalization.
    pub theta: f64,
    /// Phase in [0, 2*pi).
    pub phi: f64,
}

impl RotationBlock {
    pub fn new(pair_low: usize, theta: f64, phi: f64) -> Self {
        Self { pair_low, theta, phi }
    }

    /// The 2x2 rotation entries [[a, b], [c, d]] in row-major order.
    pub fn entries(&self) -> [Complex64; 4] {
        let (sin_t, cos_t) = self.theta.sin_cos();
        let e_phi = Complex64::from_polar(1.0, self.phi);
        [
            e_phi * cos_t,
            Complex64::new(-sin_t, 0.0),
            e_phi * sin_t,
            Complex64::new(cos_t, 0.0),
        ]
    }
}

/// Ordered mesh of rotations plus the final diagonal phase layer.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshPlan {
    dim: usize,
    blocks: Vec<RotationBlock>,
    final_phases: Vec<f64>,
}

impl MeshPlan {
    /// Validate and build a plan: N(N-1)/2 blocks, nearest-neighbor pairs in
    /// range, N final phases, finite angles.
    pub fn new(dim: usize, blocks: Vec<RotationBlock>, final_phases: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        let expected = dim * (dim - 1) / 2;
        if blocks.len() != expected {
            return Err(Error::InvalidParameter(format!(
                "plan for dim {dim} must have {expected} blocks, got {}",
                blocks.len()
            )));
        }
        if final_phases.len() != dim {
            return Err(Error::InvalidParameter(format!(
                "plan for dim {dim} must have {dim} final phases, got {}",
                final_phases.len()
            )));
        }
        for b in &blocks {
            if b.pair_low + 1 >= dim {
                return Err(Error::PairOutOfRange {
                    low: b.pair_low,
                    high: b.pair_low + 1,
                    dim,
                });
            }
            if !b.theta.is_finite() || !b.phi.is_finite() {
                return Err(Error::InvalidParameter(
                    "plan angles must be finite".into(),
                ));
            }
        }
        if final_phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter(
                "final phases must be finite".into(),
            ));
        }
        Ok(Self { dim, blocks, final_phases })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[RotationBlock] {
        &self.blocks
    }

    pub fn final_phases(&self) -> &[f64] {
        &self.final_phases
    }

    /// Replace the angles while keeping the mesh layout; used by the
    /// optimizer, which owns a flat parameter vector.
    pub fn with_angles(&self, thetas: &[f64], phis: &[f64], final_phases: &[f64]) -> Result<Self> {
        if thetas.len() != self.blocks.len() || phis.len() != self.blocks.len() {
            return Err(Error::InvalidParameter(
                "angle vectors must match block count".into(),
            ));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(thetas.iter().zip(phis.iter()))
            .map(|(b, (&t, &p))| RotationBlock::new(b.pair_low, t, p))
            .collect();
        MeshPlan::new(self.dim, blocks, final_phases.to_vec())
    }

    /// Serialize to the interchange JSON document.
    pub fn to_json(&self) -> String {
        let file = PlanJson {
            dim: self.dim,
            block_order: BLOCK_ORDER.to_string(),
            blocks: self.blocks.clone(),
            final_phases: self.final_phases.clone(),
        };
        serde_json::to_string_pretty(&file).expect("plan serialization cannot fail")
    }

    /// Parse and validate the interchange JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: PlanJson =
            serde_json::from_str(text).map_err(|e| Error::PlanFormat(e.to_string()))?;
        if file.block_order != BLOCK_ORDER {
            return Err(Error::PlanFormat(format!(
                "unsupported block_order '{}', expected '{BLOCK_ORDER}'",
                file.block_order
            )));
        }
        MeshPlan::new(file.dim, file.blocks, file.final_phases)
    }
}

#[derive(Serialize, Deserialize)]
struct PlanJson {
    dim: usize,
    #[serde(default = "default_block_order")]
    block_order: String,
    blocks: Vec<RotationBlock>,
    final_phases: Vec<f64>,
}

fn default_block_order() -> String {
    BLOCK_ORDER.to_string()
}

fn wrap_2pi(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y >= TAU {
        0.0
    } else {
        y
    }
}

/// Decompose a unitary into a rectangular nearest-neighbor mesh.
///
/// Nulls the lower triangle along successive subdiagonals, alternating
/// column rotations (from the right) and row rotations (from the left), then
/// commutes the residual diagonal through the left factors so every rotation
/// ends up after the diagonal layer. Degenerate (already-zero) entries get
/// theta = 0, phi = 0, the minimum-drive choice.
pub fn decompose(target: &ComplexMatrix) -> Result<MeshPlan> {
    let n = target.square_dim()?;
    target.require_unitary(DECOMPOSE_UNITARY_TOL)?;

    let mut work = target.clone();
    // Ops recorded in application order.
    let mut rights: Vec<RotationBlock> = Vec::new();
    let mut lefts: Vec<RotationBlock> = Vec::new();

    for k in 0..n.saturating_sub(1) {
        let d = n - 1 - k; // subdiagonal being cleared: row - col = d
        if k % 2 == 0 {
            // Column rotations, walking the subdiagonal bottom-right to top-left.
            for j in 0..=k {
                let r = n - 1 - j;
                let c = k - j;
                let u1 = work[(r, c)];
                let u2 = work[(r, c + 1)];
                let (theta, phi) = if u1.norm() == 0.0 {
                    (0.0, 0.0)
                } else {
                    (u1.norm().atan2(u2.norm()), wrap_2pi(u1.arg() - u2.arg()))
                };
                apply_inverse_from_right(&mut work, c, theta, phi);
                rights.push(RotationBlock::new(c, theta, phi));
            }
        } else {
            // Row rotations, walking the subdiagonal top-left to bottom-right.
            for j in 0..=k {
                let r = d + j;
                let c = j;
                let u1 = work[(r - 1, c)];
                let u2 = work[(r, c)];
                let (theta, phi) = if u2.norm() == 0.0 {
                    (0.0, 0.0)
                } else {
                    (
                        u2.norm().atan2(u1.norm()),
                        wrap_2pi(u2.arg() - u1.arg() + PI),
                    )
                };
                apply_from_left(&mut work, r - 1, theta, phi);
                lefts.push(RotationBlock::new(r - 1, theta, phi));
            }
        }
    }

    // Residual diagonal phases.
    let mut phases: Vec<f64> = (0..n).map(|j| work[(j, j)].arg()).collect();

    // Commute the diagonal through the inverted left rotations, innermost
    // (last applied) first: R(theta, phi)^-1 D(alpha, beta) =
    // D(beta - phi + pi, beta) R(theta, alpha - beta + pi).
    let mut plan_blocks = rights;
    for op in lefts.iter().rev() {
        let m = op.pair_low;
        let alpha = phases[m];
        let beta = phases[m + 1];
        plan_blocks.push(RotationBlock::new(m, op.theta, wrap_2pi(alpha - beta + PI)));
        phases[m] = beta - op.phi + PI;
    }

    let final_phases = phases.into_iter().map(wrap_2pi).collect();
    MeshPlan::new(n, plan_blocks, final_phases)
}

/// Ideal-limit inverse: embed each rotation on its pair, multiply in plan
/// order (first block acts first), then apply the final diagonal phases.
pub fn reconstruct(plan: &MeshPlan) -> Result<ComplexMatrix> {
    let n = plan.dim;
    let mut out = ComplexMatrix::identity(n);
    for block in &plan.blocks {
        if block.pair_low + 1 >= n {
            return Err(Error::PairOutOfRange {
                low: block.pair_low,
                high: block.pair_low + 1,
                dim: n,
            });
        }
        apply_from_left(&mut out, block.pair_low, block.theta, block.phi);
    }
    for (j, &phase) in plan.final_phases.iter().enumerate() {
        let factor = Complex64::from_polar(1.0, phase);
        for z in out.row_mut(j) {
            *z *= factor;
        }
    }
    Ok(out)
}

/// Left-multiply by the rotation embedded on rows (m, m+1).
fn apply_from_left(mat: &mut ComplexMatrix, m: usize, theta: f64, phi: f64) {
    let (sin_t, cos_t) = theta.sin_cos();
    let e_phi = Complex64::from_polar(1.0, phi);
    let (top, bottom) = mat.row_pair_mut(m);
    for (a, b) in top.iter_mut().zip(bottom.iter_mut()) {
        let new_top = e_phi * cos_t * *a - sin_t * *b;
        let new_bottom = e_phi * sin_t * *a + cos_t * *b;
        *a = new_top;
        *b = new_bottom;
    }
}

/// Right-multiply by the inverse rotation acting on columns (m, m+1).
fn apply_inverse_from_right(mat: &mut ComplexMatrix, m: usize, theta: f64, phi: f64) {
    let (sin_t, cos_t) = theta.sin_cos();
    let e_mphi = Complex64::from_polar(1.0, -phi);
    for r in 0..mat.rows() {
        let a = mat[(r, m)];
        let b = mat[(r, m + 1)];
        mat[(r, m)] = e_mphi * cos_t * a - sin_t * b;
        mat[(r, m + 1)] = e_mphi * sin_t * a + cos_t * b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{dft_matrix, haar_random_unitary};

    #[test]
    fn single_bin_plan_is_one_phase() {
        let u = ComplexMatrix::new(1, 1, vec![Complex64::from_polar(1.0, 1.2)]).unwrap();
        let plan = decompose(&u).unwrap();
        assert!(plan.blocks().is_empty());
        assert!((plan.final_phases()[0] - 1.2).abs() < 1e-12);
        let back = reconstruct(&plan).unwrap();
        assert!(back.max_abs_diff(&u) < 1e-12);
    }

    #[test]
    fn identity_two_bins_round_trips_with_null_rotation() {
        let id = ComplexMatrix::identity(2);
        let plan = decompose(&id).unwrap();
        assert_eq!(plan.blocks().len(), 1);
        assert_eq!(plan.blocks()[0].theta, 0.0);
        assert_eq!(plan.blocks()[0].phi, 0.0);
        let back = reconstruct(&plan).unwrap();
        assert!(back.max_abs_diff(&id) < 1e-14);
    }

    #[test]
    fn trivial_plan_reconstructs_identity() {
        let blocks = vec![
            RotationBlock::new(0, 0.0, 0.0),
            RotationBlock::new(1, 0.0, 0.0),
            RotationBlock::new(0, 0.0, 0.0),
        ];
        let plan = MeshPlan::new(3, blocks, vec![0.0; 3]).unwrap();
        let m = reconstruct(&plan).unwrap();
        assert!(m.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn single_block_matches_rotation_form() {
        let plan = MeshPlan::new(
            2,
            vec![RotationBlock::new(0, std::f64::consts::FRAC_PI_4, 0.0)],
            vec![0.0, 0.0],
        )
        .unwrap();
        let m = reconstruct(&plan).unwrap();
        let h = 0.5_f64.sqrt();
        assert!((m[(0, 0)].re - h).abs() < 1e-15);
        assert!((m[(0, 1)].re + h).abs() < 1e-15);
        assert!((m[(1, 0)].re - h).abs() < 1e-15);
        assert!((m[(1, 1)].re - h).abs() < 1e-15);
    }

    #[test]
    fn haar_five_bin_round_trip() {
        let u = haar_random_unitary(5, 42).unwrap();
        let plan = decompose(&u).unwrap();
        assert_eq!(plan.blocks().len(), 10);
        let back = reconstruct(&plan).unwrap();
        assert!(back.max_abs_diff(&u) < 1e-10);
    }

    #[test]
    fn round_trip_across_dimensions() {
        for n in 2..=10 {
            for s in 0..12 {
                let u = haar_random_unitary(n, 1000 * n as u64 + s).unwrap();
                let plan = decompose(&u).unwrap();
                assert_eq!(plan.blocks().len(), n * (n - 1) / 2);
                let back = reconstruct(&plan).unwrap();
                let err = back.max_abs_diff(&u);
                assert!(err <= 1e-10, "n={n} seed={s} err={err:.3e}");
                assert!(back.unitarity_error() <= 1e-10);
            }
        }
    }

    #[test]
    fn dft_round_trips() {
        for n in 2..=10 {
            let v = dft_matrix(n).unwrap();
            let plan = decompose(&v).unwrap();
            let back = reconstruct(&plan).unwrap();
            assert!(back.max_abs_diff(&v) <= 1e-10, "n={n}");
        }
    }

    #[test]
    fn angles_are_canonical() {
        for seed in 0..5 {
            let u = haar_random_unitary(7, 500 + seed).unwrap();
            let plan = decompose(&u).unwrap();
            for b in plan.blocks() {
                assert!(b.theta >= 0.0 && b.theta <= std::f64::consts::FRAC_PI_2 + 1e-12);
                assert!(b.phi >= 0.0 && b.phi < TAU);
                assert!(b.pair_low + 1 < 7);
            }
            for &p in plan.final_phases() {
                assert!((0.0..TAU).contains(&p));
            }
        }
    }

    /// The pair schedule is a pure function of N: column rotations walk each
    /// even subdiagonal top pair down to 0, row rotations cover the odd ones,
    /// and the commuted left blocks land in reverse order.
    fn expected_pair_schedule(n: usize) -> Vec<usize> {
        let mut rights = Vec::new();
        let mut lefts = Vec::new();
        for k in 0..n.saturating_sub(1) {
            if k % 2 == 0 {
                for j in 0..=k {
                    rights.push(k - j);
                }
            } else {
                let d = n - 1 - k;
                for j in 0..=k {
                    lefts.push(d + j - 1);
                }
            }
        }
        lefts.reverse();
        rights.extend(lefts);
        rights
    }

    #[test]
    fn pair_schedule_is_the_fixed_mesh_layout() {
        for n in 2..=10 {
            let u = haar_random_unitary(n, 77 + n as u64).unwrap();
            let plan = decompose(&u).unwrap();
            let got: Vec<usize> = plan.blocks().iter().map(|b| b.pair_low).collect();
            assert_eq!(got, expected_pair_schedule(n), "n={n}");
        }
    }

    #[test]
    fn schedule_packs_into_alternating_columns() {
        // Greedy packing into mesh columns: each block goes into the first
        // column after any earlier block sharing a bin. Columns must
        // alternate even/odd pairs and number at most N.
        for n in 2..=10 {
            let u = haar_random_unitary(n, 3 + n as u64).unwrap();
            let plan = decompose(&u).unwrap();
            let mut bin_last_col = vec![0usize; n]; // 0 = untouched
            let mut max_col = 0usize;
            for b in plan.blocks() {
                let col = bin_last_col[b.pair_low].max(bin_last_col[b.pair_low + 1]) + 1;
                assert_eq!(
                    (col - 1) % 2,
                    b.pair_low % 2,
                    "n={n}: column {col} holds pair {}",
                    b.pair_low
                );
                bin_last_col[b.pair_low] = col;
                bin_last_col[b.pair_low + 1] = col;
                max_col = max_col.max(col);
            }
            assert!(max_col <= n);
        }
    }

    #[test]
    fn decompose_rejects_bad_input() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(decompose(&rect), Err(Error::NotSquare { .. })));
        let not_unitary = ComplexMatrix::from_fn(3, 3, |r, c| Complex64::new((r + c) as f64, 0.0));
        assert!(matches!(
            decompose(&not_unitary),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn reconstruct_rejects_out_of_range_pair() {
        let plan = MeshPlan::new(
            2,
            vec![RotationBlock::new(1, 0.1, 0.0)],
            vec![0.0, 0.0],
        );
        assert!(plan.is_err());
    }

    #[test]
    fn plan_json_round_trip_and_order_marker() {
        let u = haar_random_unitary(4, 9).unwrap();
        let plan = decompose(&u).unwrap();
        let text = plan.to_json();
        assert!(text.contains(BLOCK_ORDER));
        let parsed = MeshPlan::from_json(&text).unwrap();
        assert_eq!(plan, parsed);

        let bad = text.replace(BLOCK_ORDER, "last_block_acts_first");
        assert!(MeshPlan::from_json(&bad).is_err());
    }
}
