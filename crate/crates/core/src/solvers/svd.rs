use faer::Mat;

use crate::error::{Error, Result};

/// Default cap on the column count of dense SVD problems.
pub const DEFAULT_DENSE_CAP: usize = 20_000;

/// Environment variable overriding [`DEFAULT_DENSE_CAP`].
pub const DENSE_CAP_ENV: &str = "HARMONIC_DENSE_CAP";

pub fn dense_cap() -> usize {
    std::env::var(DENSE_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_DENSE_CAP)
}

#[derive(Clone, Debug)]
pub struct NullSpace {
    pub nullity: usize,
    /// Orthonormal columns spanning the numerical null space.
    pub basis: Mat<f64>,
    /// All singular values, non-increasing.
    pub singular_values: Vec<f64>,
}

/// Numerical null space: singular values `σ ≤ rel_threshold·σ_max` count as zero.
pub fn svd_nullity(a: &Mat<f64>, rel_threshold: f64, cap: usize) -> Result<NullSpace> {
    let (m, n) = (a.nrows(), a.ncols());
    if n > cap {
        return Err(Error::MeshTooLargeForDense { size: n, cap });
    }
    if n == 0 {
        return Ok(NullSpace {
            nullity: 0,
            basis: Mat::zeros(0, 0),
            singular_values: vec![],
        });
    }
    if m == 0 {
        return Ok(NullSpace {
            nullity: n,
            basis: Mat::identity(n, n),
            singular_values: vec![],
        });
    }
    let svd = if m >= n { a.thin_svd() } else { a.svd() }
        .map_err(|e| Error::SingularMatrix(format!("svd failed: {e:?}")))?;
    let s = svd.S().column_vector();
    let singular_values: Vec<f64> = (0..s.nrows()).map(|i| s[i]).collect();
    let smax = singular_values.first().copied().unwrap_or(0.0);
    let rank = singular_values
        .iter()
        .filter(|&&v| v > rel_threshold * smax)
        .count();
    let nullity = n - rank;
    let v = svd.V();
    let basis = Mat::from_fn(n, nullity, |i, j| v[(i, rank + j)]);
    Ok(NullSpace {
        nullity,
        basis,
        singular_values,
    })
}

/// Numerical rank with the same threshold convention.
pub fn svd_rank(a: &Mat<f64>, rel_threshold: f64) -> Result<usize> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(0);
    }
    let s = a
        .singular_values()
        .map_err(|e| Error::SingularMatrix(format!("svd failed: {e:?}")))?;
    let smax = s.first().copied().unwrap_or(0.0);
    Ok(s.iter().filter(|&&v| v > rel_threshold * smax).count())
}
