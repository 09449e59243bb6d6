//! Lowest-order Whitney basis functions on a single cell.
//!
//! Every basis function of degree 1 or 2 is affine in the barycentric
//! coordinates, `W = Σ_a λ_a c_a`, so it is stored as four coefficient
//! vectors. Products then integrate exactly with `∫ λ_a λ_b = |T|(1 + δ_ab)/20`.

use crate::meshgen::{cross, dot, sub};

/// Local edges and faces of a cell with sorted vertices, in lexicographic order.
pub const LOCAL_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
pub const LOCAL_FACES: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];

pub type Coeffs = [[f64; 3]; 4];

#[derive(Clone, Copy, Debug)]
pub struct CellGeometry {
    pub points: [[f64; 3]; 4],
    /// Unsigned volume.
    pub volume: f64,
    /// Gradients of the barycentric coordinates.
    pub grads: [[f64; 3]; 4],
}

impl CellGeometry {
    pub fn new(points: [[f64; 3]; 4]) -> Self {
        let e1 = sub(points[1], points[0]);
        let e2 = sub(points[2], points[0]);
        let e3 = sub(points[3], points[0]);
        let det = dot(e1, cross(e2, e3));
        let g1 = cross(e2, e3).map(|x| x / det);
        let g2 = cross(e3, e1).map(|x| x / det);
        let g3 = cross(e1, e2).map(|x| x / det);
        let g0 = [0, 1, 2].map(|d| -(g1[d] + g2[d] + g3[d]));
        Self {
            points,
            volume: det.abs() / 6.0,
            grads: [g0, g1, g2, g3],
        }
    }

    pub fn barycenter(&self) -> [f64; 3] {
        [0, 1, 2].map(|d| self.points.iter().map(|p| p[d]).sum::<f64>() / 4.0)
    }

    /// `λ_i ∇λ_j − λ_j ∇λ_i`
    pub fn edge_basis(&self, [i, j]: [usize; 2]) -> Coeffs {
        let mut c = [[0.0; 3]; 4];
        c[i] = self.grads[j];
        c[j] = self.grads[i].map(|x| -x);
        c
    }

    /// `2(λ_i ∇λ_j×∇λ_k − λ_j ∇λ_i×∇λ_k + λ_k ∇λ_i×∇λ_j)`
    pub fn face_basis(&self, [i, j, k]: [usize; 3]) -> Coeffs {
        let g = &self.grads;
        let mut c = [[0.0; 3]; 4];
        c[i] = cross(g[j], g[k]).map(|x| 2.0 * x);
        c[j] = cross(g[i], g[k]).map(|x| -2.0 * x);
        c[k] = cross(g[i], g[j]).map(|x| 2.0 * x);
        c
    }

    /// `∫_T λ_a λ_b`
    pub fn lambda_product(&self, a: usize, b: usize) -> f64 {
        self.volume * if a == b { 2.0 } else { 1.0 } / 20.0
    }

    pub fn inner(&self, u: &Coeffs, v: &Coeffs) -> f64 {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                s += self.lambda_product(a, b) * dot(u[a], v[b]);
            }
        }
        s
    }

    pub fn local_mass(&self, k: usize) -> Vec<Vec<f64>> {
        match k {
            0 => (0..4)
                .map(|a| (0..4).map(|b| self.lambda_product(a, b)).collect())
                .collect(),
            1 => {
                let basis: Vec<Coeffs> = LOCAL_EDGES.iter().map(|&e| self.edge_basis(e)).collect();
                gram(self, &basis)
            }
            2 => {
                let basis: Vec<Coeffs> = LOCAL_FACES.iter().map(|&f| self.face_basis(f)).collect();
                gram(self, &basis)
            }
            3 => vec![vec![1.0 / self.volume]],
            _ => panic!("degree {k} has no mass matrix"),
        }
    }

    /// Whitney reconstruction of local degree-1 or degree-2 DOFs at barycentric `lambda`.
    pub fn reconstruct(&self, k: usize, dofs: &[f64], lambda: [f64; 4]) -> [f64; 3] {
        let mut out = [0.0; 3];
        let mut add = |c: Coeffs, w: f64| {
            for a in 0..4 {
                for d in 0..3 {
                    out[d] += w * lambda[a] * c[a][d];
                }
            }
        };
        match k {
            1 => LOCAL_EDGES.iter().zip(dofs).for_each(|(&e, &w)| add(self.edge_basis(e), w)),
            2 => LOCAL_FACES.iter().zip(dofs).for_each(|(&f, &w)| add(self.face_basis(f), w)),
            _ => panic!("vector reconstruction needs degree 1 or 2"),
        }
        out
    }
}

fn gram(g: &CellGeometry, basis: &[Coeffs]) -> Vec<Vec<f64>> {
    basis
        .iter()
        .map(|u| basis.iter().map(|v| g.inner(u, v)).collect())
        .collect()
}
