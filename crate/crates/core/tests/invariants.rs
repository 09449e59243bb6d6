//! Property tests for the structural identities of the discrete complex.

use std::sync::OnceLock;

use harmonic_fields::complex::{build_complex, interpolate, Cochain, DeRhamComplex, Field};
use harmonic_fields::meshgen::{generate_canonical, validate_markers, CanonicalDomainSpec, DomainKind};
use harmonic_fields::solvers::{cg_solve_observed, gf_rank, CsrMatrix, SolverConfig, DEFAULT_PRIME};
use harmonic_fields::topology::{betti_numbers, circulation, euler_characteristic, flux};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SMALL: [(DomainKind, usize); 5] = [
    (DomainKind::Box, 4),
    (DomainKind::BoxWithTunnel, 4),
    (DomainKind::BoxWithCavity, 4),
    (DomainKind::HollowTorus, 8),
    (DomainKind::Fig1Domain, 8),
];

fn complexes() -> &'static [DeRhamComplex] {
    static CACHE: OnceLock<Vec<DeRhamComplex>> = OnceLock::new();
    CACHE.get_or_init(|| {
        SMALL
            .iter()
            .map(|&(k, n)| build_complex(&generate_canonical(&CanonicalDomainSpec::new(k, n)).unwrap()).unwrap())
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn d_squared_vanishes(idx in 0usize..5, k in 0usize..2, seed in any::<u64>()) {
        let c = &complexes()[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // dyadic values keep every face and cell sum exact
        let values: Vec<f64> = (0..c.count(k)).map(|_| rng.gen_range(-65536i32..=65536) as f64 / 256.0).collect();
        let dd = c.apply_d(&c.apply_d(&Cochain::new(k, values)).unwrap()).unwrap();
        prop_assert!(dd.values.iter().all(|&v| v == 0.0));
        prop_assert!(c.incidence(k + 1).matmul(c.incidence(k)).is_zero());
    }

    #[test]
    fn interpolation_commutes_with_gradient(idx in 0usize..3, coeff in prop::array::uniform10(-3.0f64..3.0)) {
        let c = &complexes()[idx];
        // cubic u: its gradient restricted to an edge has degree 2, so two Gauss points are exact
        let u = |p: [f64; 3]| {
            let [x, y, z] = p;
            coeff[0] + coeff[1] * x + coeff[2] * y + coeff[3] * z + coeff[4] * x * y
                + coeff[5] * y * z + coeff[6] * x * x * z + coeff[7] * y * y * y + coeff[8] * x * y * z + coeff[9] * z * z
        };
        let grad = |p: [f64; 3]| {
            let [x, y, z] = p;
            [
                coeff[1] + coeff[4] * y + 2.0 * coeff[6] * x * z + coeff[8] * y * z,
                coeff[2] + coeff[4] * x + coeff[5] * z + 3.0 * coeff[7] * y * y + coeff[8] * x * z,
                coeff[3] + coeff[5] * y + coeff[6] * x * x + coeff[8] * x * y + 2.0 * coeff[9] * z,
            ]
        };
        let lhs = interpolate(c, 1, &Field::Vector(&grad), 2).unwrap();
        let rhs = c.apply_d(&interpolate(c, 0, &Field::Scalar(&u), 2).unwrap()).unwrap();
        let scale = rhs.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (a, b) in lhs.values.iter().zip(&rhs.values) {
            prop_assert!((a - b).abs() <= 1e-12 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn curl_commutes_for_linear_fields(idx in 0usize..3, m in prop::array::uniform9(-2.0f64..2.0), b in prop::array::uniform3(-2.0f64..2.0)) {
        let c = &complexes()[idx];
        // u = M x + b has constant curl, so face and edge rules are exact at q = 1
        let u = |p: [f64; 3]| {
            let mut out = b;
            for i in 0..3 {
                for j in 0..3 {
                    out[i] += m[3 * i + j] * p[j];
                }
            }
            out
        };
        let curl = [m[7] - m[5], m[2] - m[6], m[3] - m[1]];
        let curl_u = |_: [f64; 3]| curl;
        let lhs = interpolate(c, 2, &Field::Vector(&curl_u), 1).unwrap();
        let rhs = c.apply_d(&interpolate(c, 1, &Field::Vector(&u), 1).unwrap()).unwrap();
        for (a, b) in lhs.values.iter().zip(&rhs.values) {
            prop_assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn stokes_on_cut_surfaces(idx in 1usize..5, seed in any::<u64>()) {
        let c = &complexes()[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Cochain::new(1, (0..c.count(1)).map(|_| rng.gen_range(-4096i32..=4096) as f64 / 1024.0).collect());
        let w = c.apply_d(&a).unwrap();
        for (s, b) in c.mesh().cut_surfaces.iter().zip(&c.mesh().cut_boundaries) {
            prop_assert_eq!(flux(c, &w, s).unwrap(), circulation(c, &a, b).unwrap());
        }
    }

    #[test]
    fn reversing_a_loop_negates_its_crossing_row(idx in 0usize..3) {
        let mesh = complexes()[[1, 3, 4][idx]].mesh().clone();
        let before = validate_markers(&mesh).crossing;
        for i in 0..mesh.tunnel_loops.len() {
            let mut flipped = mesh.clone();
            flipped.reverse_loop(i);
            let after = validate_markers(&flipped).crossing;
            for (r, row) in after.iter().enumerate() {
                let sign = if r == i { -1 } else { 1 };
                prop_assert_eq!(row.iter().map(|x| sign * x).collect::<Vec<_>>(), before[r].clone());
            }
        }
    }

    #[test]
    fn gf_rank_is_transpose_invariant(rows in 1usize..12, cols in 1usize..12, entries in prop::collection::vec((0usize..12, 0usize..12, -3i64..=3), 0..60)) {
        let trip: Vec<_> = entries.into_iter().filter(|&(r, c, _)| r < rows && c < cols).collect();
        let a = CsrMatrix::from_triplets(rows, cols, &trip);
        prop_assert_eq!(gf_rank(&a, DEFAULT_PRIME), gf_rank(&a.transpose(), DEFAULT_PRIME));
        let dense = DMatrix::from_fn(rows, cols, |r, c| a.get(r, c) as f64);
        prop_assert_eq!(gf_rank(&a, DEFAULT_PRIME), dense.rank(1e-9));
    }

    #[test]
    fn cg_energy_error_decreases(idx in 0usize..3, rhs in prop::collection::vec(-1.0f64..1.0, 64)) {
        let c = &complexes()[idx];
        let interior = c.interior_indices(0);
        let k = c.d(0).congruence(c.mass(1)).select(&interior, &interior);
        let n = k.nrows();
        let b: Vec<f64> = (0..n).map(|i| rhs[i % rhs.len()] * (1.0 + (i / rhs.len()) as f64)).collect();
        let dense = DMatrix::from_fn(n, n, |r, cc| k.get(r, cc));
        let exact = dense.clone().cholesky().unwrap().solve(&DVector::from_vec(b.clone()));
        let mut errors = Vec::new();
        cg_solve_observed(&k, &b, &SolverConfig::with_tolerance(1e-13), |_, x| {
            let e = DVector::from_column_slice(x) - &exact;
            errors.push((e.transpose() * &dense * &e)[0]);
        }).unwrap();
        let floor = 1e-20 * (exact.transpose() * &dense * &exact)[0];
        for w in errors.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-9) + floor, "{} then {}", w[0], w[1]);
        }
    }

    #[test]
    fn volume_counts_solid_voxels(idx in 0usize..5, h in 0.05f64..2.0) {
        let (kind, n) = SMALL[idx];
        let mesh = generate_canonical(&CanonicalDomainSpec::new(kind, n).with_cell_size(h)).unwrap();
        // each solid voxel splits into six tetrahedra
        prop_assert_eq!(mesh.tets.len() % 6, 0);
        let voxels = (mesh.tets.len() / 6) as f64;
        let v = mesh.total_volume();
        prop_assert!((v - voxels * h * h * h).abs() <= 1e-12 * v);
    }
}

#[test]
fn euler_characteristic_is_alternating_betti_sum() {
    for c in complexes() {
        let b = betti_numbers(c).as_array();
        let alt = b[0] as i64 - b[1] as i64 + b[2] as i64 - b[3] as i64;
        assert_eq!(euler_characteristic(c), alt);
        let counts = [0, 1, 2, 3].map(|k| c.count(k) as i64);
        assert_eq!(counts[0] - counts[1] + counts[2] - counts[3], alt);
    }
}
