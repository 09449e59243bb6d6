//! Sparse linear algebra: CSR storage, preconditioned CG, direct solves for
//! symmetric indefinite systems, dense SVD null spaces and exact GF(p) ranks.

mod cg;
mod direct;
mod gf;
mod sparse;
mod svd;

pub use cg::{cg_solve, cg_solve_observed, CgSolution, Preconditioner, SolverConfig};
pub use direct::{ldlt_solve, SymmetricFactorization, DIRECT_RESIDUAL_TOL};
pub use gf::{gf_rank, DEFAULT_PRIME};
pub use sparse::{dot, norm2, norm_inf, snap_to_dyadic_grid, CsrMatrix, SparseMatrix};
pub use svd::{dense_cap, svd_nullity, svd_rank, NullSpace, DEFAULT_DENSE_CAP, DENSE_CAP_ENV};

/// Dense copy of a sparse matrix as a faer matrix.
pub fn to_faer(a: &SparseMatrix) -> faer::Mat<f64> {
    let mut m = faer::Mat::zeros(a.nrows(), a.ncols());
    for (r, c, v) in a.triplets() {
        m[(r, c)] = v;
    }
    m
}
