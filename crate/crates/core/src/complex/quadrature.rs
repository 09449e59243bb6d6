//! Gauss rules on the unit interval and collapsed product rules on the
//! reference triangle and tetrahedron.

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(q: usize) -> Vec<(f64, f64)> {
    assert!(q >= 1, "quadrature order must be positive");
    let mut out = Vec::with_capacity(q);
    for i in 0..q {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(q, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(q, x);
        let w = 2.0 / ((1.0 - x * x) * d * d);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// `P_n(x)` and `P_n'(x)`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Points `(s, t)` and weights on `{s, t ≥ 0, s + t ≤ 1}`; weights sum to 1/2.
pub fn triangle_rule(q: usize) -> Vec<([f64; 2], f64)> {
    let g = gauss_legendre(q);
    let mut out = Vec::with_capacity(q * q);
    for &(a, wa) in &g {
        for &(b, wb) in &g {
            out.push(([a, b * (1.0 - a)], wa * wb * (1.0 - a)));
        }
    }
    out
}

/// Points and weights on the reference tetrahedron; weights sum to 1/6.
pub fn tet_rule(q: usize) -> Vec<([f64; 3], f64)> {
    let g = gauss_legendre(q);
    let mut out = Vec::with_capacity(q * q * q);
    for &(a, wa) in &g {
        for &(b, wb) in &g {
            for &(c, wc) in &g {
                let x = a;
                let y = b * (1.0 - a);
                let z = c * (1.0 - a) * (1.0 - b);
                out.push(([x, y, z], wa * wb * wc * (1.0 - a) * (1.0 - a) * (1.0 - b)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_integrates_monomials_exactly() {
        for q in 1..=8 {
            let g = gauss_legendre(q);
            for p in 0..2 * q {
                let s: f64 = g.iter().map(|&(x, w)| w * x.powi(p as i32)).sum();
                assert!((s - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "q={q} p={p}");
            }
        }
    }

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    #[test]
    fn triangle_rule_matches_dirichlet_integrals() {
        // ∫ s^a t^b = a! b! / (a + b + 2)!
        let r = triangle_rule(4);
        for a in 0..4u32 {
            for b in 0..4 - a {
                let s: f64 = r.iter().map(|&(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32)).sum();
                let exact = factorial(a) * factorial(b) / factorial(a + b + 2);
                assert!((s - exact).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn tet_rule_matches_dirichlet_integrals() {
        let r = tet_rule(4);
        for a in 0..4u32 {
            for b in 0..4 - a {
                for c in 0..4 - a - b {
                    let s: f64 = r
                        .iter()
                        .map(|&(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32) * p[2].powi(c as i32))
                        .sum();
                    let exact = factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
                    assert!((s - exact).abs() < 1e-15);
                }
            }
        }
    }
}
