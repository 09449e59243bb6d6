//! Tangent harmonic fields as curls of boundary lifts plus interior corrections.

mod correction;
mod lift;

use std::fmt;
use std::str::FromStr;

pub use correction::{
    solve_correction, solve_correction_simplified, CorrectionSolution, CorrectionSystem,
};
pub use lift::{build_boundary_lift, check_lift, BoundaryLift, LiftCheck};

use crate::complex::{Cochain, DeRhamComplex};
use crate::error::{Error, Result};
use crate::harmonic_normal::NormalHarmonicBasis;
use crate::meshgen::validate_markers;
use crate::solvers::norm_inf;
use crate::topology::flux;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Variant {
    /// Constrain against the computed normal harmonic fields.
    #[default]
    Full,
    /// Constrain against gradients of the cavity indicators.
    Simplified,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Full => "full",
            Variant::Simplified => "simplified",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Variant::Full),
            "simplified" => Ok(Variant::Simplified),
            other => Err(Error::InvalidSpec(format!("unknown variant `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TangentHarmonicBasis {
    pub variant: Variant,
    pub lifts: Vec<BoundaryLift>,
    pub corrections: Vec<CorrectionSolution>,
    /// `A_i = A⁰_i + Aᵇ_i`
    pub potentials: Vec<Cochain>,
    /// `w_i = D¹ A_i`
    pub fields: Vec<Cochain>,
    /// `F[j][i]` is the flux of `w_i` through cut surface `j`.
    pub flux: Vec<Vec<f64>>,
}

impl TangentHarmonicBasis {
    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }
}

/// Builds all `β₁` fields, factoring the saddle system once.
pub fn tangent_harmonic_basis(
    complex: &DeRhamComplex,
    normal: &NormalHarmonicBasis,
    tol: f64,
    variant: Variant,
) -> Result<TangentHarmonicBasis> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidSpec(format!("tolerance {tol} must be positive")));
    }
    let report = validate_markers(complex.mesh());
    if !report.passed {
        return Err(Error::InvalidMarkers(report.problems.join("; ")));
    }
    let n = complex.mesh().tunnel_loops.len();
    let lifts = (1..=n)
        .map(|i| build_boundary_lift(complex, i))
        .collect::<Result<Vec<_>>>()?;
    let columns = match variant {
        Variant::Full => normal.fields.clone(),
        Variant::Simplified => normal
            .indicators
            .iter()
            .map(|psi| complex.apply_d(psi))
            .collect::<Result<_>>()?,
    };
    let system = CorrectionSystem::assemble(complex, &columns)?;
    let potentials_b: Vec<Cochain> = lifts.iter().map(|l| l.potential.clone()).collect();
    let corrections = system.solve(&potentials_b)?;
    for c in &corrections {
        if c.residual > tol {
            return Err(Error::SolverDiverged {
                residual: c.residual,
                iterations: 1,
            });
        }
    }
    let mut potentials = Vec::with_capacity(n);
    let mut fields = Vec::with_capacity(n);
    for (lift, corr) in lifts.iter().zip(&corrections) {
        let mut a = complex.extend_by_zero(1, &corr.a0)?;
        for (x, b) in a.values.iter_mut().zip(&lift.potential.values) {
            *x += b;
        }
        fields.push(complex.apply_d(&a)?);
        potentials.push(a);
    }
    let surfaces = &complex.mesh().cut_surfaces;
    let mut f = vec![vec![0.0; n]; surfaces.len()];
    for (j, s) in surfaces.iter().enumerate() {
        for (i, w) in fields.iter().enumerate() {
            f[j][i] = flux(complex, w, s)?;
        }
    }
    Ok(TangentHarmonicBasis {
        variant,
        lifts,
        corrections,
        potentials,
        fields,
        flux: f,
    })
}

/// Membership of a 2-cochain in the tangent harmonic space.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentMembership {
    pub max_divergence: f64,
    pub max_boundary_dof: f64,
    /// `max_a |⟨w, D¹a⟩_{M²}| / ‖w‖_{M²}` over interior edge functions `a`.
    pub orthogonality: f64,
    pub fluxes: Vec<f64>,
}

pub fn verify_membership(complex: &DeRhamComplex, w: &Cochain) -> Result<TangentMembership> {
    if w.degree != 2 {
        return Err(Error::DegreeOutOfRange(w.degree));
    }
    let max_divergence = norm_inf(&complex.apply_d(w)?.values);
    let max_boundary_dof = complex
        .boundary_indices(2)
        .iter()
        .fold(0.0f64, |m, &f| m.max(w.values[f].abs()));
    let m2w = complex.mass(2).mul_vec(&w.values);
    let back = complex.d(1).mul_vec_transposed(&m2w);
    let worst = complex
        .interior_indices(1)
        .iter()
        .fold(0.0f64, |m, &e| m.max(back[e].abs()));
    let norm = complex.mass_norm(w);
    let fluxes = complex
        .mesh()
        .cut_surfaces
        .iter()
        .map(|s| flux(complex, w, s))
        .collect::<Result<_>>()?;
    Ok(TangentMembership {
        max_divergence,
        max_boundary_dof,
        orthogonality: if norm > 0.0 { worst / norm } else { worst },
        fluxes,
    })
}
