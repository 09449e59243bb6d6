//! The end-to-end verification run.

use std::time::Instant;

use faer::prelude::*;
use faer::Mat;

use super::report::{Check, VerificationReport};
use crate::complex::{Cochain, DeRhamComplex};
use crate::error::Result;
use crate::harmonic_normal::{normal_harmonic_basis, normal_membership, NormalHarmonicBasis};
use crate::harmonic_tangent::{check_lift, tangent_harmonic_basis, verify_membership, TangentHarmonicBasis, Variant};
use crate::meshgen::{validate_markers, DomainKind};
use crate::solvers::{SolverConfig, SparseMatrix};
use crate::topology::{betti_numbers, euler_characteristic, flux, harmonic_space, BettiVector, HarmonicSpace};

/// Smallest admissible ratio of extreme singular values of a basis Gram matrix.
pub const INDEPENDENCE_THRESHOLD: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub solver: SolverConfig,
    /// Tolerance of the floating-point checks.
    pub check_tolerance: f64,
    /// Variant whose fields are reported; the other one is always solved for
    /// the equivalence gap.
    pub variant: Variant,
    /// Compute the dense harmonic null spaces (dimension and span checks).
    pub dense_checks: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            check_tolerance: 1e-8,
            variant: Variant::Full,
            dense_checks: true,
        }
    }
}

pub fn expected_betti(kind: DomainKind) -> [usize; 4] {
    match kind {
        DomainKind::Box => [1, 0, 0, 0],
        DomainKind::BoxWithTunnel => [1, 1, 0, 0],
        DomainKind::BoxWithCavity => [1, 0, 1, 0],
        DomainKind::HollowTorus => [1, 2, 1, 0],
        DomainKind::Fig1Domain => [1, 2, 2, 0],
    }
}

/// Everything computed by a verification run.
pub struct VerificationRun {
    pub report: VerificationReport,
    pub betti: BettiVector,
    pub normal: NormalHarmonicBasis,
    pub tangent: TangentHarmonicBasis,
    /// The other variant, used for the equivalence gap.
    pub tangent_alt: TangentHarmonicBasis,
}

fn max_dev_from_identity(m: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

/// Smallest over largest singular value of the mass Gram matrix of `vs`.
pub fn gram_conditioning(mass: &SparseMatrix, vs: &[Cochain]) -> f64 {
    if vs.is_empty() {
        return 1.0;
    }
    let n = vs.len();
    let g = Mat::from_fn(n, n, |i, j| mass.bilinear(&vs[i].values, &vs[j].values));
    let s = g.singular_values().unwrap_or_default();
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 0.0,
    }
}

/// Largest mass-norm residual of projecting each unit-normalized `targets`
/// vector onto the span of `basis`.
pub fn span_residual(mass: &SparseMatrix, basis: &[Cochain], targets: &[Cochain]) -> f64 {
    let n = basis.len();
    let g = Mat::from_fn(n, n, |i, j| mass.bilinear(&basis[i].values, &basis[j].values));
    let mut worst = 0.0f64;
    for t in targets {
        let norm = mass.bilinear(&t.values, &t.values).sqrt();
        if norm == 0.0 {
            continue;
        }
        let h: Vec<f64> = t.values.iter().map(|v| v / norm).collect();
        let mut resid = h.clone();
        if n > 0 {
            let rhs = Mat::from_fn(n, 1, |i, _| mass.bilinear(&basis[i].values, &h));
            let coef = g.as_ref().full_piv_lu().solve(&rhs);
            for (i, b) in basis.iter().enumerate() {
                for (r, v) in resid.iter_mut().zip(&b.values) {
                    *r -= coef[(i, 0)] * v;
                }
            }
        }
        worst = worst.max(mass.bilinear(&resid, &resid).max(0.0).sqrt());
    }
    worst
}

/// Betti numbers, Euler characteristic and marker validation.
pub fn check_topology(complex: &DeRhamComplex, kind: Option<DomainKind>, report: &mut VerificationReport) -> BettiVector {
    let betti = betti_numbers(complex);
    let euler = euler_characteristic(complex);
    report.betti = Some(betti.as_array());
    report.euler = Some(euler);
    if let Some(kind) = kind {
        report
            .checks
            .push(Check::exact("betti_numbers", betti.as_array() == expected_betti(kind)));
    }
    report
        .checks
        .push(Check::exact("euler_characteristic", betti.euler_characteristic() == euler));
    let markers = validate_markers(complex.mesh());
    report.crossing = markers.crossing.clone();
    report.checks.push(Check::exact("markers_valid", markers.passed));
    report
        .checks
        .push(Check::exact("tunnel_count", complex.mesh().tunnel_loops.len() == betti.b1));
    report.checks.push(Check::exact(
        "cavity_count",
        complex.mesh().boundary_components.len().saturating_sub(1) == betti.b2,
    ));
    betti
}

/// Dense harmonic null spaces of degree 1 and 2 checked against `betti`.
pub fn check_dimensions(
    complex: &DeRhamComplex,
    betti: &BettiVector,
    report: &mut VerificationReport,
) -> Result<(HarmonicSpace, HarmonicSpace)> {
    let h1 = harmonic_space(complex, 1)?;
    let h2 = harmonic_space(complex, 2)?;
    report.harmonic_dims = [Some(h1.dimension), Some(h2.dimension)];
    report.checks.push(Check::exact("harmonic_dimension_1", h1.dimension == betti.b1));
    report.checks.push(Check::exact("harmonic_dimension_2", h2.dimension == betti.b2));
    Ok((h1, h2))
}

pub fn check_normal(
    complex: &DeRhamComplex,
    config: &VerifyConfig,
    report: &mut VerificationReport,
) -> Result<NormalHarmonicBasis> {
    let tol = config.check_tolerance;
    let normal = normal_harmonic_basis(complex, &config.solver)?;
    report.duality = normal.duality.clone();
    report
        .checks
        .push(Check::bounded("normal_duality", max_dev_from_identity(&normal.duality), tol));
    let (mut nb, mut nc, mut nd) = (0.0f64, 0.0f64, 0.0f64);
    for v in &normal.fields {
        let m = normal_membership(complex, v)?;
        nb = nb.max(m.max_boundary_dof);
        nc = nc.max(m.max_curl);
        nd = nd.max(m.weak_divergence);
    }
    report.checks.push(Check::zero("normal_boundary_dofs", nb));
    report.checks.push(Check::zero("normal_curl", nc));
    report.checks.push(Check::bounded("normal_weak_divergence", nd, tol));
    report.checks.push(Check::at_least(
        "normal_independence",
        gram_conditioning(complex.mass(1), &normal.fields),
        INDEPENDENCE_THRESHOLD,
    ));
    report.values.push((
        "normal.cg_residual".into(),
        normal.residuals.iter().fold(0.0f64, |m, &r| m.max(r)),
    ));
    report.values.push((
        "normal.cg_iterations".into(),
        normal.iterations.iter().copied().max().unwrap_or(0) as f64,
    ));
    Ok(normal)
}

/// Tangent fields of `config.variant`; with `compare` the other variant is
/// solved too and the equivalence gap is reported.
pub fn check_tangent(
    complex: &DeRhamComplex,
    normal: &NormalHarmonicBasis,
    config: &VerifyConfig,
    compare: bool,
    report: &mut VerificationReport,
) -> Result<(TangentHarmonicBasis, Option<TangentHarmonicBasis>)> {
    let tol = config.check_tolerance;
    let tangent = tangent_harmonic_basis(complex, normal, config.solver.tolerance, config.variant)?;
    let other = if compare {
        let v = match config.variant {
            Variant::Full => Variant::Simplified,
            Variant::Simplified => Variant::Full,
        };
        Some(tangent_harmonic_basis(complex, normal, config.solver.tolerance, v)?)
    } else {
        None
    };

    let mut support = 0usize;
    let mut surface_curl = 0.0f64;
    let mut circ = Vec::new();
    for l in &tangent.lifts {
        let c = check_lift(complex, l)?;
        support += c.interior_support;
        surface_curl = surface_curl.max(c.max_surface_curl);
        circ.push(c.circulations);
    }
    report
        .checks
        .push(Check::exact("lift_circulation_identity", max_dev_from_identity(&circ) == 0.0));
    report.checks.push(Check::zero("lift_surface_curl", surface_curl));
    report.checks.push(Check::zero("lift_interior_support", support as f64));
    report.circulation = circ;

    report.flux = tangent.flux.clone();
    report
        .checks
        .push(Check::bounded("tangent_flux", max_dev_from_identity(&tangent.flux), tol));
    let (mut td, mut tb, mut to) = (0.0f64, 0.0f64, 0.0f64);
    for w in &tangent.fields {
        let m = verify_membership(complex, w)?;
        td = td.max(m.max_divergence);
        tb = tb.max(m.max_boundary_dof);
        to = to.max(m.orthogonality);
    }
    report.checks.push(Check::zero("tangent_divergence", td));
    report.checks.push(Check::zero("tangent_boundary_dofs", tb));
    report.checks.push(Check::bounded("tangent_orthogonality", to, tol));
    report.checks.push(Check::at_least(
        "tangent_independence",
        gram_conditioning(complex.mass(2), &tangent.fields),
        INDEPENDENCE_THRESHOLD,
    ));

    let mut correction_flux = 0.0f64;
    for corr in &tangent.corrections {
        let w0 = complex.apply_d(&complex.extend_by_zero(1, &corr.a0)?)?;
        for s in &complex.mesh().cut_surfaces {
            correction_flux = correction_flux.max(flux(complex, &w0, s)?.abs());
        }
    }
    report.checks.push(Check::zero("correction_flux", correction_flux));

    let all: Vec<_> = tangent.corrections.iter().chain(other.iter().flat_map(|o| &o.corrections)).collect();
    let sigma = all.iter().fold(0.0f64, |m, c| m.max(c.sigma_norm));
    let p = all.iter().fold(0.0f64, |m, c| m.max(c.p_norm));
    let resid = all.iter().fold(0.0f64, |m, c| m.max(c.residual));
    report.checks.push(Check::bounded("sigma_vanishes", sigma, tol));
    report.checks.push(Check::bounded("p_vanishes", p, tol));
    report.values.push(("tangent.saddle_residual".into(), resid));

    if let Some(other) = &other {
        let gap = equivalence_gap(complex, &tangent, other);
        report.checks.push(Check::bounded("simplified_equivalence", gap, tol));
    }
    Ok((tangent, other))
}

/// `max_i ‖A⁰_i − Ã⁰_i‖_{M¹} / max(1, ‖A⁰_i‖_{M¹})`, with `a` as reference.
pub fn equivalence_gap(complex: &DeRhamComplex, a: &TangentHarmonicBasis, b: &TangentHarmonicBasis) -> f64 {
    let ie = complex.interior_indices(1);
    let m1 = complex.mass(1).select(&ie, &ie);
    let mut gap = 0.0f64;
    for (x, y) in a.corrections.iter().zip(&b.corrections) {
        let d: Vec<f64> = x.a0.iter().zip(&y.a0).map(|(p, q)| p - q).collect();
        let scale = m1.bilinear(&x.a0, &x.a0).max(0.0).sqrt().max(1.0);
        gap = gap.max(m1.bilinear(&d, &d).max(0.0).sqrt() / scale);
    }
    gap
}

pub fn check_spans(
    complex: &DeRhamComplex,
    spaces: &(HarmonicSpace, HarmonicSpace),
    normal: &NormalHarmonicBasis,
    tangent: &TangentHarmonicBasis,
    tol: f64,
    report: &mut VerificationReport,
) {
    report.checks.push(Check::bounded(
        "tangent_span",
        span_residual(complex.mass(2), &tangent.fields, &spaces.0.basis),
        tol,
    ));
    report.checks.push(Check::bounded(
        "normal_span",
        span_residual(complex.mass(1), &normal.fields, &spaces.1.basis),
        tol,
    ));
}

/// Runs every stage; the alternative tangent variant is always solved.
pub fn run_verification(
    complex: &DeRhamComplex,
    kind: Option<DomainKind>,
    config: &VerifyConfig,
) -> Result<VerificationRun> {
    let mut report = VerificationReport::new(complex);
    let mut clock = Instant::now();
    let mut lap = |report: &mut VerificationReport, name: &str| {
        report.timings.push((name.to_string(), clock.elapsed().as_secs_f64()));
        clock = Instant::now();
    };
    let betti = check_topology(complex, kind, &mut report);
    lap(&mut report, "topology");
    let normal = check_normal(complex, config, &mut report)?;
    lap(&mut report, "normal");
    let (tangent, alt) = check_tangent(complex, &normal, config, true, &mut report)?;
    lap(&mut report, "tangent");
    if config.dense_checks {
        let spaces = check_dimensions(complex, &betti, &mut report)?;
        check_spans(complex, &spaces, &normal, &tangent, config.check_tolerance, &mut report);
        lap(&mut report, "dense");
    }
    Ok(VerificationRun {
        report,
        betti,
        normal,
        tangent,
        tangent_alt: alt.expect("alternative variant is always solved"),
    })
}
