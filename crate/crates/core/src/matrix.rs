//! Dense complex matrices, the common currency of the toolkit.
//!
//! Everything here is sized for frequency-bin ladders (M <= 64), so a plain
//! row-major `Vec<Complex64>` with O(n^3) products is the right tool; no
//! sparse or blocked machinery.

use num_complex::Complex64;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Max-norm tolerance below which a matrix is accepted as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from row-major entries; the count must match the shape.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(Error::BadEntryCount {
                rows,
                cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Square dimension, or an error for non-square matrices.
    pub fn square_dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Contiguous row slice.
    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub(crate) fn row_mut(&mut self, r: usize) -> &mut [Complex64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Mutable access to two distinct rows at once (for 2x2 block updates).
    pub(crate) fn row_pair_mut(&mut self, r: usize) -> (&mut [Complex64], &mut [Complex64]) {
        debug_assert!(r + 1 < self.rows);
        let (head, tail) = self.data.split_at_mut((r + 1) * self.cols);
        (
            &mut head[r * self.cols..],
            &mut tail[..self.cols],
        )
    }

    pub fn conjugate_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    /// Matrix product; panics on inner-dimension mismatch (programmer error).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let src = other.row(k);
                let dst = out.row_mut(r);
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d += a * s;
                }
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// Copy of the `n x n` subblock anchored at `(row0, col0)`.
    pub fn subblock(&self, row0: usize, col0: usize, n: usize) -> Self {
        assert!(row0 + n <= self.rows && col0 + n <= self.cols);
        Self::from_fn(n, n, |r, c| self[(row0 + r, col0 + c)])
    }

    /// Largest entrywise modulus of the difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm of U†U - I.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.rows;
        debug_assert!(self.is_square());
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                // (U†U)_ij = sum_k conj(U_ki) U_kj
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self[(k, i)].conj() * self[(k, j)];
                }
                if i == j {
                    acc -= Complex64::new(1.0, 0.0);
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.unitarity_error() <= tol
    }

    /// Check unitarity, reporting the deviation on failure.
    pub fn require_unitary(&self, tol: f64) -> Result<()> {
        let dim_check = self.square_dim()?;
        let _ = dim_check;
        let deviation = self.unitarity_error();
        if deviation <= tol {
            Ok(())
        } else {
            Err(Error::NotUnitary {
                deviation,
                tolerance: tol,
            })
        }
    }

    /// Tr(A†B), the Hilbert-Schmidt inner product.
    pub fn hs_inner(&self, other: &Self) -> Complex64 {
        debug_assert_eq!(self.rows, other.rows);
        debug_assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Sum of squared entry moduli, Tr(A†A).
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn new_rejects_bad_entry_count() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![c(1.0, 0.0); 3]),
            Err(Error::BadEntryCount { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(0, 2, vec![]),
            Err(Error::EmptyMatrix)
        ));
    }

    #[test]
    fn identity_is_unitary() {
        let id = ComplexMatrix::identity(5);
        assert!(id.unitarity_error() < 1e-15);
    }

    #[test]
    fn mul_matches_hand_computation() {
        let a = ComplexMatrix::new(2, 2, vec![c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)])
            .unwrap();
        let b = ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)])
            .unwrap();
        let ab = a.mul(&b);
        assert_eq!(ab[(0, 0)], c(0.0, 2.0)); // i*1 + 1*i
        assert_eq!(ab[(0, 1)], c(1.0, 0.0));
        assert_eq!(ab[(1, 0)], c(0.0, 2.0));
        assert_eq!(ab[(1, 1)], c(2.0, 0.0));
    }

    #[test]
    fn conjugate_transpose_involution() {
        let a = ComplexMatrix::from_fn(3, 2, |r, c_| c(r as f64, c_ as f64 + 0.5));
        let back = a.conjugate_transpose().conjugate_transpose();
        assert_eq!(a, back);
    }

    #[test]
    fn subblock_extracts_window() {
        let m = ComplexMatrix::from_fn(6, 6, |r, c_| c((r * 6 + c_) as f64, 0.0));
        let w = m.subblock(2, 2, 2);
        assert_eq!(w[(0, 0)].re, 14.0);
        assert_eq!(w[(1, 1)].re, 21.0);
    }
}
