//! The gauged curl-curl saddle system for the interior correction.

use crate::complex::{Cochain, DeRhamComplex};
use crate::error::{Error, Result};
use crate::harmonic_normal::SNAP_GUARD_BITS;
use crate::solvers::{norm_inf, snap_to_dyadic_grid, SparseMatrix, SymmetricFactorization};

/// Interior correction `A⁰` with its multipliers.
#[derive(Clone, Debug)]
pub struct CorrectionSolution {
    /// Gauge multiplier on interior vertices.
    pub sigma: Vec<f64>,
    /// Correction on interior edges.
    pub a0: Vec<f64>,
    /// Coefficients of the harmonic constraint columns.
    pub p: Vec<f64>,
    /// `‖Ax − b‖∞ / ‖b‖∞` of the block system.
    pub residual: f64,
    /// `‖σ‖_{M⁰}`
    pub sigma_norm: f64,
    /// `‖P p‖_{M¹}`
    pub p_norm: f64,
}

/// The assembled block matrix
///
/// ```text
/// [ M⁰        (D⁰)ᵀM¹   0    ] [σ ]   [ 0           ]
/// [ M¹D⁰      (D¹)ᵀM²D¹ M¹P  ] [A⁰] = [ −(D¹)ᵀM²D¹Aᵇ ]
/// [ 0         PᵀM¹      0    ] [p ]   [ 0           ]
/// ```
///
/// restricted to interior vertices and edges.
pub struct CorrectionSystem<'c> {
    complex: &'c DeRhamComplex,
    matrix: SparseMatrix,
    columns: Vec<Vec<f64>>,
    iv: Vec<usize>,
    ie: Vec<usize>,
}

impl<'c> CorrectionSystem<'c> {
    /// `columns` are 1-cochains spanning the harmonic constraint; they must
    /// vanish on boundary edges.
    pub fn assemble(complex: &'c DeRhamComplex, columns: &[Cochain]) -> Result<Self> {
        let iv = complex.interior_indices(0);
        let ie = complex.interior_indices(1);
        let boundary = complex.boundary_mask(1);
        let mut cols = Vec::with_capacity(columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.degree != 1 || c.values.len() != complex.count(1) {
                return Err(Error::MismatchedComplex(format!("constraint column {} is not a 1-cochain", j + 1)));
            }
            if c.values.iter().zip(boundary).any(|(&v, &b)| b && v != 0.0) {
                return Err(Error::InconsistentBasis(j + 1));
            }
            cols.push(complex.restrict_homogeneous(c)?);
        }
        let (nv, ne, np) = (iv.len(), ie.len(), cols.len());
        let m0 = complex.mass(0).select(&iv, &iv);
        let m1 = complex.mass(1).select(&ie, &ie);
        let grad = complex.d(0).select(&ie, &iv);
        let all_faces: Vec<usize> = (0..complex.count(2)).collect();
        let curl = complex.d(1).select(&all_faces, &ie);
        let curlcurl = curl.congruence(complex.mass(2));
        let m1grad = m1.matmul(&grad);

        let mut trip = Vec::new();
        trip.extend(m0.triplets());
        for (r, c, v) in m1grad.triplets() {
            trip.push((nv + r, c, v));
            trip.push((c, nv + r, v));
        }
        trip.extend(curlcurl.triplets().map(|(r, c, v)| (nv + r, nv + c, v)));
        for (j, col) in cols.iter().enumerate() {
            let m1p = m1.mul_vec(col);
            for (r, v) in m1p.into_iter().enumerate() {
                if v != 0.0 {
                    trip.push((nv + r, nv + ne + j, v));
                    trip.push((nv + ne + j, nv + r, v));
                }
            }
        }
        let n = nv + ne + np;
        Ok(Self {
            complex,
            matrix: SparseMatrix::from_triplets(n, n, &trip),
            columns: cols,
            iv,
            ie,
        })
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    /// Right-hand side for a boundary lift.
    pub fn rhs(&self, lift: &Cochain) -> Vec<f64> {
        let c = self.complex;
        let w = c.d(1).mul_vec(&lift.values);
        let m2w = c.mass(2).mul_vec(&w);
        let back = c.d(1).mul_vec_transposed(&m2w);
        let mut b = vec![0.0; self.matrix.nrows()];
        for (r, &e) in self.ie.iter().enumerate() {
            b[self.iv.len() + r] = -back[e];
        }
        b
    }

    /// Factors once and solves for every lift.
    pub fn solve(&self, lifts: &[Cochain]) -> Result<Vec<CorrectionSolution>> {
        if lifts.is_empty() {
            return Ok(vec![]);
        }
        let factor = SymmetricFactorization::new(&self.matrix)?;
        let rhs: Vec<Vec<f64>> = lifts.iter().map(|l| self.rhs(l)).collect();
        let xs = factor.solve(&rhs)?;
        let (nv, ne) = (self.iv.len(), self.ie.len());
        let c = self.complex;
        let m0 = c.mass(0).select(&self.iv, &self.iv);
        let m1 = c.mass(1).select(&self.ie, &self.ie);
        let mut out = Vec::with_capacity(lifts.len());
        for ((x, b), lift) in xs.iter().zip(&rhs).zip(lifts) {
            let ax = self.matrix.mul_vec(x);
            let diff: Vec<f64> = ax.iter().zip(b).map(|(a, b)| a - b).collect();
            let scale = norm_inf(b);
            let residual = if scale > 0.0 { norm_inf(&diff) / scale } else { norm_inf(&diff) };
            let sigma = x[..nv].to_vec();
            let p = x[nv + ne..].to_vec();
            let mut pp = vec![0.0; ne];
            for (col, &coef) in self.columns.iter().zip(&p) {
                for (a, v) in pp.iter_mut().zip(col) {
                    *a += coef * v;
                }
            }
            // snap A = A⁰ + Aᵇ as a whole so that D¹ and D² act exactly
            let mut full = lift.values.clone();
            for (r, &e) in self.ie.iter().enumerate() {
                full[e] = x[nv + r];
            }
            snap_to_dyadic_grid(&mut full, SNAP_GUARD_BITS);
            let a0 = self.ie.iter().map(|&e| full[e]).collect();
            out.push(CorrectionSolution {
                sigma_norm: m0.bilinear(&sigma, &sigma).max(0.0).sqrt(),
                p_norm: m1.bilinear(&pp, &pp).max(0.0).sqrt(),
                sigma,
                a0,
                p,
                residual,
            });
        }
        Ok(out)
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("tolerance {tol} must be positive")))
    }
}

fn solve_one(complex: &DeRhamComplex, lift: &Cochain, columns: &[Cochain], tol: f64) -> Result<CorrectionSolution> {
    check_tol(tol)?;
    let sys = CorrectionSystem::assemble(complex, columns)?;
    let sol = sys.solve(std::slice::from_ref(lift))?.remove(0);
    if sol.residual > tol {
        return Err(Error::SolverDiverged {
            residual: sol.residual,
            iterations: 1,
        });
    }
    Ok(sol)
}

/// Correction constrained against the normal harmonic fields `v_j`.
pub fn solve_correction(
    complex: &DeRhamComplex,
    lift: &Cochain,
    normal_fields: &[Cochain],
    tol: f64,
) -> Result<CorrectionSolution> {
    solve_one(complex, lift, normal_fields, tol)
}

/// Correction constrained against the gradients `D⁰ψ_j` of cavity indicators.
pub fn solve_correction_simplified(
    complex: &DeRhamComplex,
    lift: &Cochain,
    indicators: &[Cochain],
    tol: f64,
) -> Result<CorrectionSolution> {
    let cols = indicators
        .iter()
        .map(|psi| complex.apply_d(psi))
        .collect::<Result<Vec<_>>>()?;
    solve_one(complex, lift, &cols, tol)
}
