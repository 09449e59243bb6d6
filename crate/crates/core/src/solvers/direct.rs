//! Direct solves for symmetric (possibly indefinite) sparse systems.
//!
//! The factorization is a sparse LU with partial pivoting. Saddle systems
//! coming from the correction problem have a singular leading block whenever
//! the domain has cavities, which rules out a static-pivot LDLᵀ.

use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};

use super::sparse::{norm_inf, SparseMatrix};
use crate::error::{Error, Result};

/// Relative residual accepted after refinement.
pub const DIRECT_RESIDUAL_TOL: f64 = 1e-10;

/// A factorization that can be reused across right-hand sides.
pub struct SymmetricFactorization<'a> {
    matrix: &'a SparseMatrix,
    lu: faer::sparse::linalg::solvers::Lu<usize, f64>,
}

impl<'a> SymmetricFactorization<'a> {
    pub fn new(matrix: &'a SparseMatrix) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n {
            return Err(Error::SingularMatrix("matrix is not square".into()));
        }
        if matrix.has_non_finite() {
            return Err(Error::NonFiniteInput);
        }
        let triplets: Vec<_> = matrix
            .triplets()
            .map(|(r, c, v)| Triplet::new(r, c, v))
            .collect();
        let csc = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
            .map_err(|e| Error::SingularMatrix(format!("{e:?}")))?;
        let lu = csc
            .sp_lu()
            .map_err(|e| Error::SingularMatrix(format!("{e:?}")))?;
        Ok(Self { matrix, lu })
    }

    /// Solves for every column of `rhs` with one step of iterative refinement.
    pub fn solve(&self, rhs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let n = self.matrix.nrows();
        let mut out = Vec::with_capacity(rhs.len());
        for b in rhs {
            assert_eq!(b.len(), n);
            if b.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteInput);
            }
            let mut x = self.apply_inverse(b);
            let r = self.residual(&x, b);
            let dx = self.apply_inverse(&r);
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += di;
            }
            let res = norm_inf(&self.residual(&x, b));
            let scale = norm_inf(b);
            if !res.is_finite() || x.iter().any(|v| !v.is_finite()) || res > DIRECT_RESIDUAL_TOL * scale {
                return Err(Error::SingularMatrix(format!(
                    "residual {res:.3e} exceeds {DIRECT_RESIDUAL_TOL:e}·‖b‖∞ = {:.3e}",
                    DIRECT_RESIDUAL_TOL * scale
                )));
            }
            out.push(x);
        }
        Ok(out)
    }

    fn apply_inverse(&self, b: &[f64]) -> Vec<f64> {
        let mut m = Mat::<f64>::from_fn(b.len(), 1, |i, _| b[i]);
        self.lu.solve_in_place(&mut m);
        (0..b.len()).map(|i| m[(i, 0)]).collect()
    }

    fn residual(&self, x: &[f64], b: &[f64]) -> Vec<f64> {
        let ax = self.matrix.mul_vec(x);
        b.iter().zip(&ax).map(|(b, ax)| b - ax).collect()
    }
}

/// One-shot solve of `A X = B` for symmetric `A`.
pub fn ldlt_solve(a: &SparseMatrix, rhs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    SymmetricFactorization::new(a)?.solve(rhs)
}
