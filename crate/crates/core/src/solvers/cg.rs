use super::sparse::{dot, norm2, SparseMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preconditioner {
    None,
    Jacobi,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    /// Relative residual target `‖Ax − b‖₂ ≤ tolerance·‖b‖₂`.
    pub tolerance: f64,
    /// Iteration cap; `None` means `10·n`.
    pub max_iterations: Option<usize>,
    pub preconditioner: Preconditioner,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: None,
            preconditioner: Preconditioner::Jacobi,
        }
    }
}

impl SolverConfig {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct CgSolution {
    pub x: Vec<f64>,
    /// Achieved relative residual `‖Ax − b‖₂ / ‖b‖₂`, recomputed from scratch.
    pub residual: f64,
    pub iterations: usize,
}

/// Preconditioned conjugate gradient for symmetric positive definite `a`.
pub fn cg_solve(a: &SparseMatrix, b: &[f64], config: &SolverConfig) -> Result<CgSolution> {
    cg_solve_observed(a, b, config, |_, _| {})
}

/// As [`cg_solve`], calling `observe(iteration, x)` after every update.
pub fn cg_solve_observed<F>(
    a: &SparseMatrix,
    b: &[f64],
    config: &SolverConfig,
    mut observe: F,
) -> Result<CgSolution>
where
    F: FnMut(usize, &[f64]),
{
    let n = a.nrows();
    assert_eq!(a.ncols(), n, "cg_solve needs a square matrix");
    assert_eq!(b.len(), n);
    if !(config.tolerance > 0.0) {
        return Err(Error::InvalidSpec("solver tolerance must be positive".into()));
    }
    if a.has_non_finite() || b.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }

    let b_norm = norm2(b);
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok(CgSolution {
            x,
            residual: 0.0,
            iterations: 0,
        });
    }

    let inv_diag: Vec<f64> = match config.preconditioner {
        Preconditioner::None => vec![1.0; n],
        Preconditioner::Jacobi => a
            .diagonal()
            .into_iter()
            .map(|d| if d > 0.0 { 1.0 / d } else { 1.0 })
            .collect(),
    };
    let max_iter = config.max_iterations.unwrap_or(10 * n.max(1));
    let target = config.tolerance * b_norm;

    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let mut iterations = 0;

    while iterations < max_iter {
        a.mul_vec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        iterations += 1;
        observe(iterations, &x);
        if norm2(&r) <= target {
            // the recurrence drifts; confirm with a true residual
            let true_res = residual_norm(a, &x, b);
            if true_res <= target {
                return Ok(CgSolution {
                    x,
                    residual: true_res / b_norm,
                    iterations,
                });
            }
            r = b.iter().zip(a.mul_vec(&x)).map(|(b, ax)| b - ax).collect();
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }

    let residual = residual_norm(a, &x, b) / b_norm;
    if residual <= config.tolerance {
        Ok(CgSolution {
            x,
            residual,
            iterations,
        })
    } else {
        Err(Error::SolverDiverged {
            residual,
            iterations,
        })
    }
}

fn residual_norm(a: &SparseMatrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.mul_vec(x);
    norm2(&b.iter().zip(&ax).map(|(b, ax)| b - ax).collect::<Vec<_>>())
}
