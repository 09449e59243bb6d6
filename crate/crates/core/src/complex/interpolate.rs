use super::quadrature::{gauss_legendre, tet_rule, triangle_rule};
use super::{Cochain, DeRhamComplex};
use crate::error::{Error, Result};
use crate::meshgen::{cross, dot, sub};

/// An analytic field: scalar for degrees 0 and 3, vector for degrees 1 and 2.
pub enum Field<'a> {
    Scalar(&'a dyn Fn([f64; 3]) -> f64),
    Vector(&'a dyn Fn([f64; 3]) -> [f64; 3]),
}

fn affine(p: [f64; 3], dirs: &[[f64; 3]], coords: &[f64]) -> [f64; 3] {
    let mut x = p;
    for (d, &t) in dirs.iter().zip(coords) {
        for i in 0..3 {
            x[i] += t * d[i];
        }
    }
    x
}

/// Degrees of freedom of an analytic field: vertex values, edge circulations,
/// face fluxes or cell integrals, using `q`-point Gauss rules per direction.
pub fn interpolate(complex: &DeRhamComplex, k: usize, field: &Field<'_>, q: usize) -> Result<Cochain> {
    if q == 0 {
        return Err(Error::InvalidSpec("quadrature order must be positive".into()));
    }
    let x = complex.vertices();
    let values = match (k, field) {
        (0, Field::Scalar(f)) => x.iter().map(|&p| f(p)).collect(),
        (1, Field::Vector(u)) => {
            let rule = gauss_legendre(q);
            complex
                .edges()
                .iter()
                .map(|&[a, b]| {
                    let t = sub(x[b], x[a]);
                    rule.iter().map(|&(s, w)| w * dot(u(affine(x[a], &[t], &[s])), t)).sum()
                })
                .collect()
        }
        (2, Field::Vector(u)) => {
            let rule = triangle_rule(q);
            complex
                .faces()
                .iter()
                .map(|&[a, b, c]| {
                    let (e1, e2) = (sub(x[b], x[a]), sub(x[c], x[a]));
                    let n = cross(e1, e2);
                    rule.iter().map(|&(st, w)| w * dot(u(affine(x[a], &[e1, e2], &st)), n)).sum()
                })
                .collect()
        }
        (3, Field::Scalar(f)) => {
            let rule = tet_rule(q);
            (0..complex.count(3))
                .map(|c| {
                    let g = complex.cell_geometry(c);
                    let p = g.points;
                    let dirs = [sub(p[1], p[0]), sub(p[2], p[0]), sub(p[3], p[0])];
                    let jac = 6.0 * g.volume;
                    rule.iter().map(|&(r, w)| w * jac * f(affine(p[0], &dirs, &r))).sum()
                })
                .collect()
        }
        (k, _) if k > 3 => return Err(Error::DegreeOutOfRange(k)),
        (k, _) => return Err(Error::FieldKindMismatch(k)),
    };
    Ok(Cochain::new(k, values))
}
