//! Compressed sparse row storage.

use std::ops::{AddAssign, Mul, Neg};

/// Compressed sparse row matrix. Column indices are sorted and unique per row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    nrows: usize,
    ncols: usize,
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<T>,
}

pub type SparseMatrix = CsrMatrix<f64>;

impl<T> CsrMatrix<T>
where
    T: Copy + Default + PartialEq + AddAssign,
{
    /// Builds from unordered triplets; duplicates are summed, entries that
    /// sum to zero are kept as explicit zeros.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, T)]) -> Self {
        let mut order: Vec<usize> = (0..triplets.len()).collect();
        order.sort_by_key(|&i| (triplets[i].0, triplets[i].1));

        let mut offsets = vec![0usize; nrows + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<T> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for &i in &order {
            let (r, c, v) = triplets[i];
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                offsets[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..nrows {
            offsets[r + 1] += offsets[r];
        }
        Self {
            nrows,
            ncols,
            offsets,
            cols,
            vals,
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self::from_triplets(nrows, ncols, &[])
    }

    pub fn identity(n: usize) -> Self
    where
        T: From<i8>,
    {
        let t: Vec<_> = (0..n).map(|i| (i, i, T::from(1))).collect();
        Self::from_triplets(n, n, &t)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let range = self.offsets[r]..self.offsets[r + 1];
        self.cols[range.clone()]
            .iter()
            .copied()
            .zip(self.vals[range].iter().copied())
    }

    pub fn row_len(&self, r: usize) -> usize {
        self.offsets[r + 1] - self.offsets[r]
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let range = self.offsets[r]..self.offsets[r + 1];
        match self.cols[range.clone()].binary_search(&c) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => T::default(),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.nrows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        let t: Vec<_> = self.triplets().map(|(r, c, v)| (c, r, v)).collect();
        Self::from_triplets(self.ncols, self.nrows, &t)
    }

    pub fn map<U, F>(&self, f: F) -> CsrMatrix<U>
    where
        F: Fn(T) -> U,
    {
        CsrMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            offsets: self.offsets.clone(),
            cols: self.cols.clone(),
            vals: self.vals.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_map = vec![usize::MAX; self.ncols];
        for (new, &old) in cols.iter().enumerate() {
            col_map[old] = new;
        }
        let mut t = Vec::new();
        for (new_r, &old_r) in rows.iter().enumerate() {
            for (c, v) in self.row(old_r) {
                if col_map[c] != usize::MAX {
                    t.push((new_r, col_map[c], v));
                }
            }
        }
        Self::from_triplets(rows.len(), cols.len(), &t)
    }

    /// Drops explicit zeros.
    pub fn pruned(&self) -> Self {
        let t: Vec<_> = self.triplets().filter(|&(_, _, v)| v != T::default()).collect();
        Self::from_triplets(self.nrows, self.ncols, &t)
    }
}

impl<T> CsrMatrix<T>
where
    T: Copy + Default + PartialEq + AddAssign + Mul<Output = T>,
{
    /// Sparse product `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.ncols, rhs.nrows, "inner dimensions differ");
        let mut t = Vec::new();
        let mut acc: Vec<Option<T>> = vec![None; rhs.ncols];
        let mut touched = Vec::new();
        for r in 0..self.nrows {
            for (k, a) in self.row(r) {
                for (c, b) in rhs.row(k) {
                    match &mut acc[c] {
                        Some(v) => *v += a * b,
                        slot @ None => {
                            *slot = Some(a * b);
                            touched.push(c);
                        }
                    }
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                t.push((r, c, acc[c].take().unwrap()));
            }
            touched.clear();
        }
        Self::from_triplets(self.nrows, rhs.ncols, &t)
    }

    /// `selfᵀ · mid · self`, the usual Galerkin sandwich.
    pub fn congruence(&self, mid: &Self) -> Self {
        self.transpose().matmul(&mid.matmul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.vals.iter().all(|&v| v == T::default())
    }
}

impl<T> CsrMatrix<T>
where
    T: Copy + Default + PartialEq + AddAssign + Mul<Output = T> + Neg<Output = T>,
{
    pub fn scaled(&self, s: T) -> Self {
        self.map(|v| v * s)
    }
}

impl SparseMatrix {
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (r, out) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for (c, v) in self.row(r) {
                s += v * x[c];
            }
            *out = s;
        }
    }

    /// `selfᵀ x` without forming the transpose.
    pub fn mul_vec_transposed(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.nrows);
        let mut y = vec![0.0; self.ncols];
        for (r, &xr) in x.iter().enumerate() {
            if xr != 0.0 {
                for (c, v) in self.row(r) {
                    y[c] += v * xr;
                }
            }
        }
        y
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(x, &self.mul_vec(y))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.nrows == self.ncols
            && self
                .triplets()
                .all(|(r, c, v)| (v - self.get(c, r)).abs() <= tol * v.abs().max(1.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let t: Vec<_> = self.triplets().chain(other.triplets()).collect();
        Self::from_triplets(self.nrows, self.ncols, &t)
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols]; self.nrows];
        for (r, c, v) in self.triplets() {
            d[r][c] = v;
        }
        d
    }

    pub fn has_non_finite(&self) -> bool {
        self.vals.iter().any(|v| !v.is_finite())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Rounds every entry to a common power-of-two quantum leaving `guard_bits`
/// of headroom below the largest magnitude, so that sums and differences of a
/// few entries with small integer weights are computed without rounding.
pub fn snap_to_dyadic_grid(x: &mut [f64], guard_bits: i32) {
    let max = norm_inf(x);
    if max == 0.0 || !max.is_finite() {
        return;
    }
    let e = max.log2().ceil() as i32;
    let quantum = 2f64.powi(e + guard_bits - 52);
    for v in x.iter_mut() {
        *v = (*v / quantum).round() * quantum;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapped_values_cancel_exactly() {
        let mut x = vec![0.1, 0.2, 0.3, -0.7, 1.0 / 3.0];
        snap_to_dyadic_grid(&mut x, 6);
        // (b − a) + (c − b) − (c − a) is 0 only if each difference is exact
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    let (a, b, c) = (x[i], x[j], x[k]);
                    assert_eq!((b - a) + (c - b) - (c - a), 0.0);
                }
            }
        }
        assert!((x[4] - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn duplicates_are_summed_and_columns_sorted() {
        let m = SparseMatrix::from_triplets(2, 3, &[(0, 2, 1.0), (0, 0, 2.0), (0, 2, 3.0), (1, 1, -1.0)]);
        assert_eq!(m.row(0).collect::<Vec<_>>(), vec![(0, 2.0), (2, 4.0)]);
        assert_eq!(m.get(1, 1), -1.0);
        assert_eq!(m.get(1, 0), 0.0);
        assert_eq!(m.nnz(), 3);
    }

    #[test]
    fn matmul_and_transpose_agree_with_dense() {
        let a = SparseMatrix::from_triplets(2, 3, &[(0, 0, 1.0), (0, 2, 2.0), (1, 1, 3.0)]);
        let b = a.transpose();
        let c = a.matmul(&b);
        assert_eq!(c.to_dense(), vec![vec![5.0, 0.0], vec![0.0, 9.0]]);
        assert_eq!(a.mul_vec_transposed(&[1.0, 1.0]), b.mul_vec(&[1.0, 1.0]));
    }

    #[test]
    fn select_reorders() {
        let a = SparseMatrix::from_triplets(3, 3, &[(0, 0, 1.0), (1, 2, 2.0), (2, 1, 3.0)]);
        let s = a.select(&[2, 1], &[1, 2]);
        assert_eq!(s.to_dense(), vec![vec![3.0, 0.0], vec![0.0, 2.0]]);
    }

    #[test]
    fn integer_matrices_multiply_exactly() {
        let a = CsrMatrix::<i64>::from_triplets(1, 2, &[(0, 0, 1), (0, 1, -1)]);
        let b = CsrMatrix::<i64>::from_triplets(2, 1, &[(0, 0, 1), (1, 0, 1)]);
        assert!(a.matmul(&b).is_zero());
    }
}
