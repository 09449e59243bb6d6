//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use harmonic_fields::complex::{build_complex, interpolate, Cochain, DeRhamComplex, Field};
use harmonic_fields::harmonic_normal::{build_constrained_space, normal_harmonic_basis, NormalHarmonicBasis};
use harmonic_fields::harmonic_tangent::{
    check_lift, tangent_harmonic_basis, CorrectionSystem, TangentHarmonicBasis, Variant,
};
use harmonic_fields::meshgen::{generate_canonical, CanonicalDomainSpec, DomainKind};
use harmonic_fields::solvers::{cg_solve, gf_rank, ldlt_solve, svd_rank, to_faer, SolverConfig, SparseMatrix, DEFAULT_PRIME};
use harmonic_fields::topology::{betti_numbers, harmonic_space, HarmonicSpace, HARMONIC_SVD_THRESHOLD};
use nalgebra::{DMatrix, DVector, Matrix4, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

struct Fixture {
    kind: DomainKind,
    n: usize,
    complex: DeRhamComplex,
    normal: NormalHarmonicBasis,
    full: TangentHarmonicBasis,
    simplified: TangentHarmonicBasis,
    spaces: Option<(HarmonicSpace, HarmonicSpace)>,
}

impl Fixture {
    fn label(&self) -> String {
        format!("{}@{}", self.kind, self.n)
    }

    fn tunneled(&self) -> bool {
        !self.complex.mesh().tunnel_loops.is_empty()
    }

    fn cavities(&self) -> bool {
        self.complex.mesh().boundary_components.len() > 1
    }
}

fn fixture(kind: DomainKind, n: usize) -> Fixture {
    let mesh = generate_canonical(&CanonicalDomainSpec::new(kind, n).with_cell_size(1.0 / n as f64)).unwrap();
    let complex = build_complex(&mesh).unwrap();
    let normal = normal_harmonic_basis(&complex, &SolverConfig::with_tolerance(1e-12)).unwrap();
    let full = tangent_harmonic_basis(&complex, &normal, 1e-12, Variant::Full).unwrap();
    let simplified = tangent_harmonic_basis(&complex, &normal, 1e-12, Variant::Simplified).unwrap();
    let spaces = Some((harmonic_space(&complex, 1).unwrap(), harmonic_space(&complex, 2).unwrap()));
    Fixture {
        kind,
        n,
        complex,
        normal,
        full,
        simplified,
        spaces,
    }
}

const RESOLUTIONS: [(DomainKind, [usize; 2]); 5] = [
    (DomainKind::Box, [4, 5]),
    (DomainKind::BoxWithTunnel, [4, 6]),
    (DomainKind::BoxWithCavity, [4, 5]),
    (DomainKind::HollowTorus, [8, 9]),
    (DomainKind::Fig1Domain, [8, 9]),
];

fn expected_betti(kind: DomainKind) -> [usize; 4] {
    match kind {
        DomainKind::Box => [1, 0, 0, 0],
        DomainKind::BoxWithTunnel => [1, 1, 0, 0],
        DomainKind::BoxWithCavity => [1, 0, 1, 0],
        DomainKind::HollowTorus => [1, 2, 1, 0],
        DomainKind::Fig1Domain => [1, 2, 2, 0],
    }
}

// ---------------------------------------------------------------- oracles

/// Boundary faces (sorted triples) found by counting cell incidences.
fn boundary_faces(complex: &DeRhamComplex) -> BTreeSet<[usize; 3]> {
    let mut count: BTreeMap<[usize; 3], usize> = BTreeMap::new();
    for c in complex.cells() {
        for skip in 0..4 {
            let f: Vec<usize> = (0..4).filter(|&i| i != skip).map(|i| c[i]).collect();
            *count.entry([f[0], f[1], f[2]]).or_default() += 1;
        }
    }
    count.into_iter().filter(|&(_, n)| n == 1).map(|(f, _)| f).collect()
}

fn boundary_edges(complex: &DeRhamComplex) -> BTreeSet<[usize; 2]> {
    boundary_faces(complex)
        .iter()
        .flat_map(|&[a, b, c]| [[a, b], [a, c], [b, c]])
        .collect()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Betti numbers of a connected-or-not solid in R³ from connectivity,
/// boundary components and the Euler characteristic.
fn betti_oracle(complex: &DeRhamComplex) -> [usize; 4] {
    let nv = complex.count(0);
    let mut parent: Vec<usize> = (0..nv).collect();
    for &[a, b] in complex.edges() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let b0 = (0..nv).filter(|&v| find(&mut parent, v) == v).count();
    let faces = boundary_faces(complex);
    let mut parent: Vec<usize> = (0..nv).collect();
    let mut on_boundary = vec![false; nv];
    for &[a, b, c] in &faces {
        for v in [a, b, c] {
            on_boundary[v] = true;
        }
        for (x, y) in [(a, b), (b, c)] {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            parent[rx] = ry;
        }
    }
    let surfaces = (0..nv).filter(|&v| on_boundary[v] && find(&mut parent, v) == v).count();
    let b2 = surfaces - b0;
    let chi = nv as i64 - complex.count(1) as i64 + complex.count(2) as i64 - complex.count(3) as i64;
    let b1 = (b0 as i64 + b2 as i64 - chi) as usize;
    [b0, b1, b2, 0]
}

/// Whitney 1-form mass matrix, assembled from barycentric gradients.
struct EdgeMass {
    cells: Vec<([usize; 6], [[f64; 6]; 6])>,
}

impl EdgeMass {
    fn new(complex: &DeRhamComplex) -> Self {
        let x = complex.vertices();
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let cells = complex
            .cells()
            .iter()
            .map(|c| {
                let m = Matrix4::from_fn(|i, j| if j == 0 { 1.0 } else { x[c[i]][j - 1] });
                let vol = m.determinant().abs() / 6.0;
                let inv = m.try_inverse().unwrap();
                let g: Vec<Vector3<f64>> = (0..4).map(|i| Vector3::new(inv[(1, i)], inv[(2, i)], inv[(3, i)])).collect();
                let mm = |i: usize, j: usize| vol * if i == j { 2.0 } else { 1.0 } / 20.0;
                let mut local = [[0.0; 6]; 6];
                for (p, &(a, b)) in pairs.iter().enumerate() {
                    for (q, &(cc, d)) in pairs.iter().enumerate() {
                        local[p][q] = g[b].dot(&g[d]) * mm(a, cc) - g[b].dot(&g[cc]) * mm(a, d)
                            - g[a].dot(&g[d]) * mm(b, cc)
                            + g[a].dot(&g[cc]) * mm(b, d);
                    }
                }
                let idx = pairs.map(|(a, b)| complex.edge_index(c[a], c[b]).unwrap());
                (idx, local)
            })
            .collect();
        Self { cells }
    }

    fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.cells
            .iter()
            .map(|(idx, m)| {
                let mut s = 0.0;
                for p in 0..6 {
                    for q in 0..6 {
                        s += u[idx[p]] * m[p][q] * v[idx[q]];
                    }
                }
                s
            })
            .sum()
    }
}

fn gradient(complex: &DeRhamComplex, phi: &[f64]) -> Vec<f64> {
    complex.edges().iter().map(|&[a, b]| phi[b] - phi[a]).collect()
}

fn identity_deviation(m: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

fn face_flux(complex: &DeRhamComplex, w: &[f64], j: usize) -> f64 {
    complex.mesh().cut_surfaces[j]
        .faces
        .iter()
        .map(|f| f.coeff as f64 * w[complex.face_index(f.vertices).unwrap()])
        .sum()
}

fn edge_circulation(complex: &DeRhamComplex, a: &[f64], edges: &[harmonic_fields::meshgen::SignedEdge]) -> f64 {
    edges
        .iter()
        .map(|e| e.coeff as f64 * a[complex.edge_index(e.vertices[0], e.vertices[1]).unwrap()])
        .sum()
}

/// Residual of the mass-orthogonal projection of unit-normalized `targets`
/// onto `span(basis)`.
fn projection_residual(inner: &dyn Fn(&[f64], &[f64]) -> f64, basis: &[Cochain], targets: &[Cochain]) -> f64 {
    let n = basis.len();
    let g = DMatrix::from_fn(n, n, |i, j| inner(&basis[i].values, &basis[j].values));
    let lu = g.lu();
    let mut worst = 0.0f64;
    for t in targets {
        let norm = inner(&t.values, &t.values).sqrt();
        let h: Vec<f64> = t.values.iter().map(|v| v / norm).collect();
        let rhs = DVector::from_fn(n, |i, _| inner(&basis[i].values, &h));
        let c = lu.solve(&rhs).unwrap_or_else(|| DVector::zeros(n));
        let mut r = h.clone();
        for (i, b) in basis.iter().enumerate() {
            for (ri, bi) in r.iter_mut().zip(&b.values) {
                *ri -= c[i] * bi;
            }
        }
        worst = worst.max(inner(&r, &r).max(0.0).sqrt());
    }
    worst
}

fn dense(a: &SparseMatrix) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(a.nrows(), a.ncols());
    for (r, c, v) in a.triplets() {
        m[(r, c)] += v;
    }
    m
}

fn rel_error(x: &[f64], y: &DVector<f64>) -> f64 {
    let scale = y.amax();
    x.iter().zip(y.iter()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / scale
}

// ---------------------------------------------------------------- criteria

fn c1_betti(fx: &[Fixture]) -> Outcome {
    let mut seen = Vec::new();
    for f in fx {
        let b = betti_numbers(&f.complex).as_array();
        let oracle = betti_oracle(&f.complex);
        ensure!(
            b == expected_betti(f.kind) && oracle == b,
            "{}: computed {b:?}, oracle {oracle:?}, expected {:?}",
            f.label(),
            expected_betti(f.kind)
        );
        seen.push(format!("{}={:?}", f.label(), b));
    }
    Ok(seen.join(" "))
}

fn c2_dimensions(fx: &[Fixture]) -> Outcome {
    for f in fx {
        let (h1, h2) = f.spaces.as_ref().unwrap();
        let b = expected_betti(f.kind);
        ensure!(
            h1.dimension == b[1] && h2.dimension == b[2],
            "{}: dim h1 = {}, dim h2 = {}, betti {:?}",
            f.label(),
            h1.dimension,
            h2.dimension,
            b
        );
    }
    Ok(format!("{} meshes, SVD threshold {HARMONIC_SVD_THRESHOLD:e}", fx.len()))
}

fn c3_normal_duality(fx: &[Fixture]) -> Outcome {
    let mut worst = 0.0f64;
    let mut kinds = BTreeSet::new();
    for f in fx.iter().filter(|f| f.cavities()) {
        let mass = EdgeMass::new(&f.complex);
        let m = f.normal.fields.len();
        ensure!(m == expected_betti(f.kind)[2], "{}: {m} normal fields", f.label());
        let mut g = vec![vec![0.0; m]; m];
        for (j, row) in g.iter_mut().enumerate() {
            let gpsi = gradient(&f.complex, &f.normal.indicators[j].values);
            for (i, v) in f.normal.fields.iter().enumerate() {
                row[i] = mass.inner(&gpsi, &v.values);
            }
        }
        let dev = identity_deviation(&g);
        ensure!(dev <= 1e-8, "{}: ‖G − I‖∞ = {dev:e}", f.label());
        worst = worst.max(dev);
        kinds.insert(f.kind.name());
    }
    ensure!(kinds.len() == 3, "cavity domains covered: {kinds:?}");
    Ok(format!("max ‖G − I‖∞ = {worst:.2e}"))
}

fn c4_lift_exactness(fx: &[Fixture]) -> Outcome {
    let mut kinds = BTreeSet::new();
    for f in fx.iter().filter(|f| f.tunneled()) {
        let c = &f.complex;
        let bedges = boundary_edges(c);
        let mesh = c.mesh();
        for (i, lift) in f.full.lifts.iter().enumerate() {
            let a = &lift.potential.values;
            for (j, b) in mesh.cut_boundaries.iter().enumerate() {
                let circ = edge_circulation(c, a, &b.edges);
                let want = if i == j { 1.0 } else { 0.0 };
                ensure!(circ == want, "{}: circulation of lift {} on boundary {} is {circ}", f.label(), i + 1, j + 1);
            }
            for (e, &[p, q]) in c.edges().iter().enumerate() {
                ensure!(a[e] == 0.0 || bedges.contains(&[p, q]), "{}: lift {} on interior edge", f.label(), i + 1);
            }
            for &[p, q, r] in &boundary_faces(c) {
                let at = |x: usize, y: usize| a[c.edge_index(x, y).unwrap()];
                let curl = at(p, q) + at(q, r) - at(p, r);
                ensure!(curl == 0.0, "{}: lift {} surface curl {curl} on {:?}", f.label(), i + 1, [p, q, r]);
            }
            let check = check_lift(c, lift).map_err(|e| e.to_string())?;
            ensure!(check.interior_support == 0 && check.max_surface_curl == 0.0, "{}: library lift check", f.label());
        }
        kinds.insert(f.kind.name());
    }
    ensure!(kinds.len() == 3, "tunneled domains covered: {kinds:?}");
    Ok("circulations exactly δ_ij, surface curl 0, no interior support".into())
}

fn c5_tangent_flux(fx: &[Fixture]) -> Outcome {
    let mut worst = 0.0f64;
    let mut intersecting = false;
    for f in fx.iter().filter(|f| f.tunneled()) {
        let c = &f.complex;
        let n = f.full.fields.len();
        ensure!(n == expected_betti(f.kind)[1], "{}: {n} tangent fields", f.label());
        let fm: Vec<Vec<f64>> = (0..n)
            .map(|j| f.full.fields.iter().map(|w| face_flux(c, &w.values, j)).collect())
            .collect();
        let dev = identity_deviation(&fm);
        ensure!(dev <= 1e-8, "{}: ‖F − I‖∞ = {dev:e}", f.label());
        worst = worst.max(dev);
        if f.kind == DomainKind::HollowTorus {
            let s = &c.mesh().cut_surfaces;
            let a: BTreeSet<_> = s[0].faces.iter().map(|f| f.vertices).collect();
            intersecting |= s[1].faces.iter().any(|f| a.contains(&f.vertices));
        }
    }
    ensure!(intersecting, "hollow torus cut surfaces do not intersect");
    Ok(format!("max ‖F − I‖∞ = {worst:.2e}, hollow torus cuts share faces"))
}

fn c6_multipliers(fx: &[Fixture]) -> Outcome {
    let (mut s, mut p) = (0.0f64, 0.0f64);
    for f in fx.iter().filter(|f| f.tunneled()) {
        for c in f.full.corrections.iter().chain(&f.simplified.corrections) {
            ensure!(
                c.sigma_norm <= 1e-8 && c.p_norm <= 1e-8,
                "{}: ‖σ‖ = {:e}, ‖p‖ = {:e}",
                f.label(),
                c.sigma_norm,
                c.p_norm
            );
            s = s.max(c.sigma_norm);
            p = p.max(c.p_norm);
        }
    }
    Ok(format!("max ‖σ‖_M0 = {s:.2e}, max ‖Pp‖_M1 = {p:.2e}"))
}

fn c7_equivalence(fx: &[Fixture]) -> Outcome {
    let mut worst = 0.0f64;
    for f in fx.iter().filter(|f| f.tunneled()) {
        let c = &f.complex;
        let mass = EdgeMass::new(c);
        for (a, b) in f.full.corrections.iter().zip(&f.simplified.corrections) {
            let a0 = c.extend_by_zero(1, &a.a0).unwrap().values;
            let b0 = c.extend_by_zero(1, &b.a0).unwrap().values;
            let d: Vec<f64> = a0.iter().zip(&b0).map(|(x, y)| x - y).collect();
            let gap = mass.inner(&d, &d).max(0.0).sqrt();
            let bound = 1e-8 * mass.inner(&a0, &a0).sqrt().max(1.0);
            ensure!(gap <= bound, "{}: gap {gap:e} > {bound:e}", f.label());
            worst = worst.max(gap / bound * 1e-8);
        }
    }
    Ok(format!("max relative gap = {worst:.2e}"))
}

fn c8_membership(fx: &[Fixture]) -> Outcome {
    let (mut orth, mut wdiv) = (0.0f64, 0.0f64);
    for f in fx {
        let c = &f.complex;
        let bfaces = boundary_faces(c);
        let bedges = boundary_edges(c);
        let interior_edges: Vec<usize> = (0..c.count(1)).filter(|&e| !bedges.contains(&c.edges()[e])).collect();
        for w in &f.full.fields {
            let div = c.incidence(2).map(|v| v as f64).mul_vec(&w.values);
            ensure!(div.iter().all(|&x| x == 0.0), "{}: D²w ≠ 0", f.label());
            for (k, face) in c.faces().iter().enumerate() {
                ensure!(!bfaces.contains(face) || w.values[k] == 0.0, "{}: boundary face flux", f.label());
            }
            let m2w = c.mass(2).mul_vec(&w.values);
            let back = c.d(1).mul_vec_transposed(&m2w);
            let norm = c.mass(2).bilinear(&w.values, &w.values).sqrt();
            let r = interior_edges.iter().fold(0.0f64, |m, &e| m.max(back[e].abs())) / norm;
            ensure!(r <= 1e-8, "{}: orthogonality residual {r:e}", f.label());
            orth = orth.max(r);
        }
        let mass = EdgeMass::new(c);
        let grad = c.d(0);
        for v in &f.normal.fields {
            for (e, edge) in c.edges().iter().enumerate() {
                ensure!(!bedges.contains(edge) || v.values[e] == 0.0, "{}: boundary edge value", f.label());
            }
            let curl = c.incidence(1).map(|x| x as f64).mul_vec(&v.values);
            ensure!(curl.iter().all(|&x| x == 0.0), "{}: D¹v ≠ 0", f.label());
            let norm = mass.inner(&v.values, &v.values).sqrt();
            let on_boundary: BTreeSet<usize> = bedges.iter().flat_map(|e| *e).collect();
            let mut r = 0.0f64;
            for vert in (0..c.count(0)).filter(|x| !on_boundary.contains(x)) {
                let mut hat = vec![0.0; c.count(0)];
                hat[vert] = 1.0;
                let g = grad.mul_vec(&hat);
                r = r.max(mass.inner(&g, &v.values).abs() / norm);
            }
            ensure!(r <= 1e-8, "{}: weak divergence {r:e}", f.label());
            wdiv = wdiv.max(r);
        }
    }
    Ok(format!("orthogonality ≤ {orth:.2e}, weak divergence ≤ {wdiv:.2e}, exact zeros hold"))
}

fn c9_span(fx: &[Fixture]) -> Outcome {
    let (mut rw, mut rv) = (0.0f64, 0.0f64);
    for f in fx {
        let c = &f.complex;
        let (h1, h2) = f.spaces.as_ref().unwrap();
        let m2 = |a: &[f64], b: &[f64]| c.mass(2).bilinear(a, b);
        let r1 = projection_residual(&m2, &f.full.fields, &h1.basis);
        let mass = EdgeMass::new(c);
        let m1 = |a: &[f64], b: &[f64]| mass.inner(a, b);
        let r2 = projection_residual(&m1, &f.normal.fields, &h2.basis);
        ensure!(r1 <= 1e-8 && r2 <= 1e-8, "{}: residuals {r1:e} (w), {r2:e} (v)", f.label());
        rw = rw.max(r1);
        rv = rv.max(r2);
    }
    Ok(format!("max residual {rw:.2e} (tangent), {rv:.2e} (normal)"))
}

fn c10_commuting() -> Outcome {
    let u0 = |p: [f64; 3]| {
        let [x, y, z] = p;
        1.0 + x - 2.0 * y + 0.5 * z + x * y * z + x * x * z - y * y * y
    };
    let grad_u0 = |p: [f64; 3]| {
        let [x, y, z] = p;
        [1.0 + y * z + 2.0 * x * z, -2.0 + x * z - 3.0 * y * y, 0.5 + x * y + x * x]
    };
    let u = |p: [f64; 3]| {
        let [x, y, z] = p;
        [y * z * z + x - 1.0, x * x * x - z, x * y * z + y * y]
    };
    let curl_u = |p: [f64; 3]| {
        let [x, y, z] = p;
        [x * z + 2.0 * y + 1.0, y * z, 3.0 * x * x - z * z]
    };
    let div_u = |p: [f64; 3]| {
        let [x, y, _] = p;
        1.0 + x * y
    };
    let mut worst = [0.0f64; 3];
    for (kind, n) in [(DomainKind::Box, 4), (DomainKind::BoxWithTunnel, 6)] {
        let mesh = generate_canonical(&CanonicalDomainSpec::new(kind, n).with_cell_size(1.0 / n as f64)).unwrap();
        let c = build_complex(&mesh).unwrap();
        let cases: [(usize, Field, Field); 3] = [
            (0, Field::Scalar(&u0), Field::Vector(&grad_u0)),
            (1, Field::Vector(&u), Field::Vector(&curl_u)),
            (2, Field::Vector(&u), Field::Scalar(&div_u)),
        ];
        for (k, field, derivative) in cases {
            let lhs = interpolate(&c, k + 1, &derivative, 4).unwrap();
            let rhs = c.apply_d(&interpolate(&c, k, &field, 4).unwrap()).unwrap();
            let dev = lhs.values.iter().zip(&rhs.values).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            ensure!(dev <= 1e-12, "{kind}@{n}, level {k}: {dev:e}");
            worst[k] = worst[k].max(dev);
        }
    }
    Ok(format!("max deviation per level {:.1e} {:.1e} {:.1e}", worst[0], worst[1], worst[2]))
}

fn c11_stokes(fx: &[Fixture]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for f in fx.iter().filter(|f| f.tunneled()) {
        let c = &f.complex;
        let mesh = c.mesh();
        let bedges = boundary_edges(c);
        for _ in 0..100 {
            // dyadic values keep every sum exact
            let a: Vec<f64> = (0..c.count(1)).map(|_| rng.gen_range(-(1i64 << 20)..=1 << 20) as f64 / 1024.0).collect();
            let w = c.apply_d(&Cochain::new(1, a.clone())).unwrap();
            for j in 0..mesh.cut_surfaces.len() {
                let lhs = face_flux(c, &w.values, j);
                let rhs = edge_circulation(c, &a, &mesh.cut_boundaries[j].edges);
                ensure!(lhs - rhs == 0.0, "{}: surface {} flux {lhs} vs circulation {rhs}", f.label(), j + 1);
                checked += 1;
            }
        }
        for j in 0..mesh.cut_surfaces.len() {
            let mut functional = vec![0.0; c.count(2)];
            for face in &mesh.cut_surfaces[j].faces {
                functional[c.face_index(face.vertices).unwrap()] += face.coeff as f64;
            }
            let pulled = c.d(1).mul_vec_transposed(&functional);
            for (e, edge) in c.edges().iter().enumerate() {
                ensure!(
                    bedges.contains(edge) || pulled[e] == 0.0,
                    "{}: flux of D¹a through surface {} depends on interior edge {edge:?}",
                    f.label(),
                    j + 1
                );
            }
        }
    }
    Ok(format!("{checked} random identities exact, interior edges carry no flux"))
}

fn c12_solvers(fx: &[Fixture]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst_cg = 0.0f64;
    let mut worst_ldlt = 0.0f64;
    for f in fx.iter().filter(|f| f.cavities()) {
        let space = build_constrained_space(&f.complex);
        let k = space.reduced_stiffness(&f.complex);
        if k.nrows() > 2000 {
            continue;
        }
        let b: Vec<f64> = (0..k.nrows()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = cg_solve(&k, &b, &SolverConfig::with_tolerance(1e-14)).map_err(|e| e.to_string())?.x;
        let oracle = dense(&k).cholesky().ok_or("stiffness not SPD")?.solve(&DVector::from_vec(b));
        let err = rel_error(&x, &oracle);
        ensure!(err <= 1e-10, "{}: CG error {err:e}", f.label());
        worst_cg = worst_cg.max(err);
    }
    for f in fx.iter().filter(|f| f.tunneled()) {
        let sys = CorrectionSystem::assemble(&f.complex, &f.normal.fields).map_err(|e| e.to_string())?;
        let a = sys.matrix();
        if a.nrows() > 2000 {
            continue;
        }
        let b = sys.rhs(&f.full.lifts[0].potential);
        let x = ldlt_solve(a, std::slice::from_ref(&b)).map_err(|e| e.to_string())?.remove(0);
        let oracle = dense(a).lu().solve(&DVector::from_vec(b)).ok_or("saddle matrix singular")?;
        let err = rel_error(&x, &oracle);
        ensure!(err <= 1e-10, "{}: LDLT error {err:e}", f.label());
        worst_ldlt = worst_ldlt.max(err);
    }
    let mut ranks = 0;
    for f in fx.iter().filter(|f| f.n == RESOLUTIONS.iter().find(|r| r.0 == f.kind).unwrap().1[0]) {
        for k in 0..3 {
            let exact = gf_rank(f.complex.incidence(k), DEFAULT_PRIME);
            let float = svd_rank(&to_faer(f.complex.d(k)), 1e-10).map_err(|e| e.to_string())?;
            ensure!(exact == float, "{}: rank D{k} = {exact} over GF(p), {float} by SVD", f.label());
            ranks += 1;
        }
    }
    Ok(format!(
        "CG error {worst_cg:.1e}, LDLT error {worst_ldlt:.1e}, {ranks} incidence ranks agree"
    ))
}

fn main() {
    let start = Instant::now();
    let fixtures: Vec<Fixture> = RESOLUTIONS
        .iter()
        .flat_map(|&(kind, ns)| ns.map(|n| (kind, n)))
        .map(|(kind, n)| fixture(kind, n))
        .collect();
    let mut out = std::io::stdout();
    let _ = writeln!(out, "fixtures built in {:.1}s", start.elapsed().as_secs_f64());

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 betti numbers", Box::new(|| c1_betti(&fixtures))),
        ("2 harmonic dimensions", Box::new(|| c2_dimensions(&fixtures))),
        ("3 normal duality", Box::new(|| c3_normal_duality(&fixtures))),
        ("4 lift exactness", Box::new(|| c4_lift_exactness(&fixtures))),
        ("5 tangent flux duality", Box::new(|| c5_tangent_flux(&fixtures))),
        ("6 vanishing multipliers", Box::new(|| c6_multipliers(&fixtures))),
        ("7 simplified equivalence", Box::new(|| c7_equivalence(&fixtures))),
        ("8 membership", Box::new(|| c8_membership(&fixtures))),
        ("9 span equivalence", Box::new(|| c9_span(&fixtures))),
        ("10 commuting diagram", Box::new(c10_commuting)),
        ("11 discrete stokes", Box::new(|| c11_stokes(&fixtures))),
        ("12 solver oracles", Box::new(|| c12_solvers(&fixtures))),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => {
                let _ = writeln!(out, "PASS criterion {name:<26} ({secs:.1}s) {detail}");
            }
            Err(why) => {
                failed += 1;
                let _ = writeln!(out, "FAIL criterion {name:<26} ({secs:.1}s) {why}");
            }
        }
    }
    let _ = writeln!(out, "{} of 12 criteria passed in {:.1}s", 12 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
