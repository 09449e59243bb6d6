//! Betti numbers, discrete harmonic dimensions, and line and surface
//! functionals on marker chains.

use std::collections::VecDeque;

use faer::Mat;

use crate::complex::{Cochain, DeRhamComplex};
use crate::error::{Error, Result};
use crate::meshgen::{EdgeChain, FaceChain};
use crate::solvers::{dense_cap, gf_rank, svd_nullity, SparseMatrix, DEFAULT_PRIME};

/// Relative singular-value threshold for harmonic null spaces.
pub const HARMONIC_SVD_THRESHOLD: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BettiVector {
    pub b0: usize,
    pub b1: usize,
    pub b2: usize,
    pub b3: usize,
}

impl BettiVector {
    pub fn as_array(&self) -> [usize; 4] {
        [self.b0, self.b1, self.b2, self.b3]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.b0 as i64 - self.b1 as i64 + self.b2 as i64 - self.b3 as i64
    }
}

/// Ranks of D⁰, D¹, D² over GF(p).
pub fn incidence_ranks(complex: &DeRhamComplex) -> [usize; 3] {
    [0, 1, 2].map(|k| gf_rank(complex.incidence(k), DEFAULT_PRIME))
}

pub fn betti_numbers(complex: &DeRhamComplex) -> BettiVector {
    let [r0, r1, r2] = incidence_ranks(complex);
    let n = [0, 1, 2, 3].map(|k| complex.count(k));
    BettiVector {
        b0: n[0] - r0,
        b1: n[1] - r0 - r1,
        b2: n[2] - r1 - r2,
        b3: n[3] - r2,
    }
}

/// `V − E + F − T`.
pub fn euler_characteristic(complex: &DeRhamComplex) -> i64 {
    complex.count(0) as i64 - complex.count(1) as i64 + complex.count(2) as i64 - complex.count(3) as i64
}

/// A numerically computed basis of a discrete harmonic space.
#[derive(Clone, Debug)]
pub struct HarmonicSpace {
    /// 1 for the tangent fields (2-cochains), 2 for the normal fields (1-cochains).
    pub k: usize,
    pub dimension: usize,
    pub basis: Vec<Cochain>,
    pub singular_values: Vec<f64>,
}

pub fn harmonic_dimension(complex: &DeRhamComplex, k: usize) -> Result<usize> {
    Ok(harmonic_space(complex, k)?.dimension)
}

/// Null space of the constrained harmonic system for `k ∈ {1, 2}`.
///
/// In both degrees the exact constraint is solved combinatorially first and
/// only the mass-weighted orthogonality block goes through the SVD. For k = 1
/// zero-divergence interior face cochains are spanned by the fundamental
/// cycles of the cell adjacency graph. For k = 2 curl-free interior edge
/// cochains are spanned by gradients of interior hat functions and cavity
/// indicators; if an exact rank count does not confirm this, the full stacked
/// matrix `[D¹_int ; (D⁰_int)ᵀ M¹_int]` is decomposed instead.
pub fn harmonic_space(complex: &DeRhamComplex, k: usize) -> Result<HarmonicSpace> {
    match k {
        1 => tangent_space(complex),
        2 => normal_space(complex),
        other => Err(Error::DegreeOutOfRange(other)),
    }
}

fn normal_space(complex: &DeRhamComplex) -> Result<HarmonicSpace> {
    match curl_free_generators(complex) {
        Some(z) => normal_space_reduced(complex, &z),
        None => normal_space_stacked(complex),
    }
}

/// Gradients of interior hat functions and of the cavity indicators,
/// restricted to interior edges. They span the curl-free interior edge
/// cochains whenever their count matches the exact kernel dimension, which
/// is checked over GF(p); otherwise `None`.
fn curl_free_generators(complex: &DeRhamComplex) -> Option<Vec<Vec<f64>>> {
    let ie = complex.interior_indices(1);
    let iv = complex.interior_indices(0);
    let mesh = complex.mesh();
    let all_faces: Vec<usize> = (0..complex.count(2)).collect();
    let kernel = ie.len() - gf_rank(&complex.incidence(1).select(&all_faces, &ie), DEFAULT_PRIME);
    let n_cav = mesh.boundary_components.len().saturating_sub(1);
    let connected = gf_rank(complex.incidence(0), DEFAULT_PRIME) + 1 == complex.count(0);
    if !connected || kernel != iv.len() + n_cav {
        return None;
    }
    let mut position = vec![usize::MAX; complex.count(1)];
    for (r, &e) in ie.iter().enumerate() {
        position[e] = r;
    }
    let grad_t = complex.d(0).transpose();
    let mut out = Vec::with_capacity(kernel);
    for &v in &iv {
        let mut z = vec![0.0; ie.len()];
        for (e, x) in grad_t.row(v) {
            if position[e] != usize::MAX {
                z[position[e]] = x;
            }
        }
        out.push(z);
    }
    for i in 1..=n_cav {
        let mut psi = vec![0.0; complex.count(0)];
        for v in mesh.component_vertices(i) {
            psi[v] = 1.0;
        }
        let g = complex.d(0).mul_vec(&psi);
        out.push(ie.iter().map(|&e| g[e]).collect());
    }
    Some(out)
}

/// SVD of `(D⁰_int)ᵀ M¹_int Z` over a basis `Z` of the curl-free interior
/// edge cochains.
fn normal_space_reduced(complex: &DeRhamComplex, z: &[Vec<f64>]) -> Result<HarmonicSpace> {
    let ie = complex.interior_indices(1);
    let iv = complex.interior_indices(0);
    let cap = dense_cap();
    if z.len() > cap {
        return Err(Error::MeshTooLargeForDense { size: z.len(), cap });
    }
    let m1 = complex.mass(1).select(&ie, &ie);
    let op = complex.d(0).select(&ie, &iv).transpose().matmul(&m1);
    let columns: Vec<Vec<f64>> = z.iter().map(|c| op.mul_vec(c)).collect();
    let ns = svd_nullity(&dense_columns(&columns, iv.len()), HARMONIC_SVD_THRESHOLD, cap)?;
    let mut vectors = combine(&ns.basis, ns.nullity, z, ie.len());
    orthonormalize(&mut vectors);
    let basis = vectors
        .iter()
        .map(|v| complex.extend_by_zero(1, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(HarmonicSpace {
        k: 2,
        dimension: ns.nullity,
        basis,
        singular_values: ns.singular_values,
    })
}

/// Columns as a dense matrix scaled to unit max entry.
fn dense_columns(columns: &[Vec<f64>], nrows: usize) -> Mat<f64> {
    let scale = columns.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = if scale > 0.0 { 1.0 / scale } else { 1.0 };
    Mat::from_fn(nrows, columns.len(), |i, j| columns[j][i] * scale)
}

/// `Z y_j` for the first `nullity` columns `y_j` of `basis`.
fn combine(basis: &Mat<f64>, nullity: usize, z: &[Vec<f64>], len: usize) -> Vec<Vec<f64>> {
    (0..nullity)
        .map(|j| {
            let mut w = vec![0.0; len];
            for (c, zc) in z.iter().enumerate() {
                let y = basis[(c, j)];
                if y != 0.0 {
                    for (wi, zi) in w.iter_mut().zip(zc) {
                        *wi += y * zi;
                    }
                }
            }
            w
        })
        .collect()
}

/// SVD of the stacked matrix `[D¹_int ; (D⁰_int)ᵀ M¹_int]`.
pub(crate) fn normal_space_stacked(complex: &DeRhamComplex) -> Result<HarmonicSpace> {
    let ie = complex.interior_indices(1);
    let iv = complex.interior_indices(0);
    let cap = dense_cap();
    if ie.len() > cap {
        return Err(Error::MeshTooLargeForDense { size: ie.len(), cap });
    }
    let all_faces: Vec<usize> = (0..complex.count(2)).collect();
    let curl = complex.d(1).select(&all_faces, &ie).pruned();
    let m1 = complex.mass(1).select(&ie, &ie);
    let grad = complex.d(0).select(&ie, &iv);
    let div = grad.transpose().matmul(&m1);
    let curl_rows: Vec<usize> = (0..curl.nrows()).filter(|&r| curl.row_len(r) > 0).collect();
    let a = stack(&[(&curl, &curl_rows), (&div, &(0..div.nrows()).collect::<Vec<_>>())], ie.len());
    let ns = svd_nullity(&a, HARMONIC_SVD_THRESHOLD, cap)?;
    let basis = (0..ns.nullity)
        .map(|j| {
            let col: Vec<f64> = (0..ie.len()).map(|i| ns.basis[(i, j)]).collect();
            complex.extend_by_zero(1, &col)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HarmonicSpace {
        k: 2,
        dimension: ns.nullity,
        basis,
        singular_values: ns.singular_values,
    })
}

/// Dense vertical stack of selected rows, each block scaled to unit max entry.
fn stack(blocks: &[(&SparseMatrix, &Vec<usize>)], ncols: usize) -> Mat<f64> {
    let nrows: usize = blocks.iter().map(|(_, r)| r.len()).sum();
    let mut a = Mat::<f64>::zeros(nrows, ncols);
    let mut offset = 0;
    for (m, rows) in blocks {
        let scale = m.max_abs();
        let scale = if scale > 0.0 { 1.0 / scale } else { 1.0 };
        for (i, &r) in rows.iter().enumerate() {
            for (c, v) in m.row(r) {
                a[(offset + i, c)] = v * scale;
            }
        }
        offset += rows.len();
    }
    a
}

/// Divergence-free interior face cochains: one column per interior face not
/// in a spanning tree of the cell adjacency graph.
pub(crate) fn divergence_free_cycles(complex: &DeRhamComplex) -> Result<Vec<Vec<f64>>> {
    let fi = complex.interior_indices(2);
    let nt = complex.count(3);
    let div = complex.d(2).select(&(0..nt).collect::<Vec<_>>(), &fi);
    let div_t = div.transpose();
    // cell adjacency through interior faces
    let mut parent_face = vec![usize::MAX; nt];
    let mut seen = vec![false; nt];
    let mut order = Vec::with_capacity(nt);
    let mut in_tree = vec![false; fi.len()];
    let mut queue = VecDeque::new();
    if nt > 0 {
        seen[0] = true;
        queue.push_back(0);
    }
    while let Some(t) = queue.pop_front() {
        order.push(t);
        for (f, _) in div.row(t) {
            for (other, _) in div_t.row(f) {
                if !seen[other] {
                    seen[other] = true;
                    parent_face[other] = f;
                    in_tree[f] = true;
                    queue.push_back(other);
                }
            }
        }
    }
    if order.len() != nt {
        return Err(Error::NonConformingMesh("cells are not face-connected".into()));
    }
    let mut cycles = Vec::new();
    for f in (0..fi.len()).filter(|&f| !in_tree[f]) {
        let mut z = vec![0.0; fi.len()];
        z[f] = 1.0;
        for &t in order.iter().rev() {
            let pf = parent_face[t];
            if pf == usize::MAX {
                continue;
            }
            let mut s = 0.0;
            let mut coeff = 0.0;
            for (g, v) in div.row(t) {
                if g == pf {
                    coeff = v;
                } else {
                    s += v * z[g];
                }
            }
            z[pf] = -s / coeff;
        }
        cycles.push(z);
    }
    Ok(cycles)
}

fn tangent_space(complex: &DeRhamComplex) -> Result<HarmonicSpace> {
    let fi = complex.interior_indices(2);
    let ie = complex.interior_indices(1);
    let cap = dense_cap();
    let cycles = divergence_free_cycles(complex)?;
    if cycles.len() > cap {
        return Err(Error::MeshTooLargeForDense { size: cycles.len(), cap });
    }
    // B = (D¹_int)ᵀ M² Z over interior faces and edges
    let m2 = complex.mass(2).select(&fi, &fi);
    let curl = complex.d(1).select(&fi, &ie);
    let op = curl.transpose().matmul(&m2);
    let columns: Vec<Vec<f64>> = cycles.iter().map(|z| op.mul_vec(z)).collect();
    let ns = svd_nullity(&dense_columns(&columns, ie.len()), HARMONIC_SVD_THRESHOLD, cap)?;
    let mut vectors = combine(&ns.basis, ns.nullity, &cycles, fi.len());
    orthonormalize(&mut vectors);
    let basis = vectors
        .iter()
        .map(|w| complex.extend_by_zero(2, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(HarmonicSpace {
        k: 1,
        dimension: ns.nullity,
        basis,
        singular_values: ns.singular_values,
    })
}

fn orthonormalize(vs: &mut [Vec<f64>]) {
    for i in 0..vs.len() {
        for _ in 0..2 {
            for j in 0..i {
                let d: f64 = vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum();
                let (head, tail) = vs.split_at_mut(i);
                for (a, b) in tail[0].iter_mut().zip(&head[j]) {
                    *a -= d * b;
                }
            }
        }
        let n = vs[i].iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 0.0 {
            vs[i].iter_mut().for_each(|a| *a /= n);
        }
    }
}

/// Signed sum of a 1-cochain along an edge chain.
pub fn circulation(complex: &DeRhamComplex, a: &Cochain, chain: &EdgeChain) -> Result<f64> {
    if a.degree != 1 {
        return Err(Error::DegreeOutOfRange(a.degree));
    }
    let mut s = 0.0;
    for e in &chain.edges {
        let i = complex
            .edge_index(e.vertices[0], e.vertices[1])
            .ok_or(Error::UnknownEdge(e.vertices))?;
        s += e.coeff as f64 * a.values[i];
    }
    Ok(s)
}

/// Signed sum of a 2-cochain over a face chain.
pub fn flux(complex: &DeRhamComplex, w: &Cochain, surface: &FaceChain) -> Result<f64> {
    if w.degree != 2 {
        return Err(Error::DegreeOutOfRange(w.degree));
    }
    let mut s = 0.0;
    for f in &surface.faces {
        let i = complex.face_index(f.vertices).ok_or(Error::UnknownFace(f.vertices))?;
        s += f.coeff as f64 * w.values[i];
    }
    Ok(s)
}
