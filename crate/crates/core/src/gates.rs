//! Standard target gates and Haar-random unitary sampling.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// RNG identity string recorded in run manifests so outputs stay
/// reproducible across toolkit versions.
pub const RNG_ALGORITHM: &str = "chacha12/seed_from_u64 + ziggurat standard normal";

/// N-dimensional discrete Fourier transform gate, V_jk = exp(2*pi*i*j*k/n)/sqrt(n).
pub fn dft_matrix(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let norm = 1.0 / (n as f64).sqrt();
    // reduce j*k mod n before forming the angle so large products stay exact
    Ok(ComplexMatrix::from_fn(n, n, |j, k| {
        let phase = TAU * ((j * k) % n) as f64 / n as f64;
        Complex64::from_polar(norm, phase)
    }))
}

/// Haar-random n x n unitary for a given seed.
///
/// QR of a standard complex Gaussian matrix, with the R-diagonal phases
/// pushed back into Q so the distribution is exactly Haar rather than
/// QR-convention dependent. Identical seeds give identical matrices.
pub fn haar_random_unitary(n: usize, seed: u64) -> Result<ComplexMatrix> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    haar_random_unitary_with_rng(n, &mut rng)
}

/// Same sampler with a caller-owned RNG, for drawing ensembles.
pub fn haar_random_unitary_with_rng<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let gauss = ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let (q, r_diag) = householder_qr(&gauss);
    // U = Q * diag(r_jj / |r_jj|)
    let mut u = q;
    for j in 0..n {
        let d = r_diag[j];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    Ok(u)
}

/// Householder QR for square complex matrices; returns Q and the diagonal of R.
fn householder_qr(a: &ComplexMatrix) -> (ComplexMatrix, Vec<Complex64>) {
    let n = a.rows();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);

    for k in 0..n {
        // Reflector annihilating the subdiagonal of column k.
        let mut norm_sq = 0.0;
        for i in k..n {
            norm_sq += r[(i, k)].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * norm;

        // v = x - alpha*e1, normalized
        let mut v = vec![Complex64::new(0.0, 0.0); n - k];
        v[0] = x0 - alpha;
        for i in (k + 1)..n {
            v[i - k] = r[(i, k)];
        }
        let v_norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sq == 0.0 {
            continue;
        }

        // R <- (I - 2 v v† / v†v) R on the trailing block
        for col in k..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in k..n {
                dot += v[i - k].conj() * r[(i, col)];
            }
            let f = dot * 2.0 / v_norm_sq;
            for i in k..n {
                let delta = f * v[i - k];
                r[(i, col)] -= delta;
            }
        }
        // Q <- Q (I - 2 v v† / v†v)
        for row in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in k..n {
                dot += q[(row, i)] * v[i - k];
            }
            let f = dot * 2.0 / v_norm_sq;
            for i in k..n {
                let delta = f * v[i - k].conj();
                q[(row, i)] -= delta;
            }
        }
    }

    let diag = (0..n).map(|j| r[(j, j)]).collect();
    (q, diag)
}
