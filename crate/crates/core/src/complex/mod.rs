//! The lowest-order Whitney de Rham complex of a marked mesh.

mod interpolate;
pub mod quadrature;
pub mod whitney;

use std::collections::HashMap;

pub use interpolate::{interpolate, Field};
use whitney::{CellGeometry, LOCAL_EDGES, LOCAL_FACES};

use crate::error::{Error, Result};
use crate::meshgen::{extract_boundary, sort3, sort4, MarkedMesh};
use crate::solvers::{CsrMatrix, SparseMatrix};

/// Coefficients of a discrete k-form.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    pub degree: usize,
    pub values: Vec<f64>,
}

impl Cochain {
    pub fn new(degree: usize, values: Vec<f64>) -> Self {
        Self { degree, values }
    }

    pub fn zeros(degree: usize, len: usize) -> Self {
        Self::new(degree, vec![0.0; len])
    }
}

#[derive(Clone, Debug)]
pub struct DeRhamComplex {
    mesh: MarkedMesh,
    edges: Vec<[usize; 2]>,
    faces: Vec<[usize; 3]>,
    /// Cells with sorted vertices.
    cells: Vec<[usize; 4]>,
    /// +1 when the sorted vertex order is positively oriented.
    cell_parity: Vec<i32>,
    geometry: Vec<CellGeometry>,
    edge_index: HashMap<[usize; 2], usize>,
    face_index: HashMap<[usize; 3], usize>,
    incidence: [CsrMatrix<i64>; 3],
    d: [SparseMatrix; 3],
    mass: [SparseMatrix; 4],
    boundary_mask: [Vec<bool>; 3],
    interior: [Vec<usize>; 3],
}

pub fn build_complex(mesh: &MarkedMesh) -> Result<DeRhamComplex> {
    DeRhamComplex::new(mesh.clone())
}

impl DeRhamComplex {
    pub fn new(mesh: MarkedMesh) -> Result<Self> {
        let nv = mesh.vertices.len();
        let mut cells = Vec::with_capacity(mesh.tets.len());
        let mut cell_parity = Vec::with_capacity(mesh.tets.len());
        for &t in &mesh.tets {
            let (s, p) = sort4(t);
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::NonConformingMesh(format!("degenerate cell {t:?}")));
            }
            cells.push(s);
            cell_parity.push(p);
        }
        let mut edges: Vec<[usize; 2]> = cells
            .iter()
            .flat_map(|c| LOCAL_EDGES.map(|[i, j]| [c[i], c[j]]))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let mut faces: Vec<[usize; 3]> = cells
            .iter()
            .flat_map(|c| LOCAL_FACES.map(|[i, j, k]| [c[i], c[j], c[k]]))
            .collect();
        faces.sort_unstable();
        faces.dedup();
        let edge_index: HashMap<_, _> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let face_index: HashMap<_, _> = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();

        let d0 = CsrMatrix::from_triplets(
            edges.len(),
            nv,
            &edges
                .iter()
                .enumerate()
                .flat_map(|(r, &[a, b])| [(r, a, -1i64), (r, b, 1)])
                .collect::<Vec<_>>(),
        );
        let d1 = CsrMatrix::from_triplets(
            faces.len(),
            edges.len(),
            &faces
                .iter()
                .enumerate()
                .flat_map(|(r, &[a, b, c])| {
                    [
                        (r, edge_index[&[a, b]], 1i64),
                        (r, edge_index[&[a, c]], -1),
                        (r, edge_index[&[b, c]], 1),
                    ]
                })
                .collect::<Vec<_>>(),
        );
        let d2 = CsrMatrix::from_triplets(
            cells.len(),
            faces.len(),
            &cells
                .iter()
                .zip(&cell_parity)
                .enumerate()
                .flat_map(|(r, (&[a, b, c, d], &s))| {
                    let s = s as i64;
                    [
                        (r, face_index[&[b, c, d]], s),
                        (r, face_index[&[a, c, d]], -s),
                        (r, face_index[&[a, b, d]], s),
                        (r, face_index[&[a, b, c]], -s),
                    ]
                })
                .collect::<Vec<_>>(),
        );
        if !d1.matmul(&d0).is_zero() || !d2.matmul(&d1).is_zero() {
            return Err(Error::NonConformingMesh("incidence matrices do not form a complex".into()));
        }

        let boundary = extract_boundary(&mesh.vertices, &mesh.tets).map_err(|e| match e {
            Error::NonManifold { face, count } => {
                Error::NonConformingMesh(format!("face {face:?} is shared by {count} cells"))
            }
            other => other,
        })?;
        let mut boundary_mask = [vec![false; nv], vec![false; edges.len()], vec![false; faces.len()]];
        for f in &boundary.faces {
            let (s, _) = sort3(*f);
            boundary_mask[2][face_index[&s]] = true;
            for [i, j] in [[0, 1], [0, 2], [1, 2]] {
                boundary_mask[1][edge_index[&[s[i], s[j]]]] = true;
            }
            for v in s {
                boundary_mask[0][v] = true;
            }
        }
        let interior = [0, 1, 2].map(|k| {
            boundary_mask[k]
                .iter()
                .enumerate()
                .filter(|(_, &b)| !b)
                .map(|(i, _)| i)
                .collect()
        });

        let geometry = cells
            .iter()
            .map(|c| CellGeometry::new(c.map(|v| mesh.vertices[v])))
            .collect();
        let d = [&d0, &d1, &d2].map(|m| m.map(|v| v as f64));
        let mut complex = Self {
            mesh,
            edges,
            faces,
            cells,
            cell_parity,
            geometry,
            edge_index,
            face_index,
            incidence: [d0, d1, d2],
            d,
            mass: [SparseMatrix::zeros(0, 0), SparseMatrix::zeros(0, 0), SparseMatrix::zeros(0, 0), SparseMatrix::zeros(0, 0)],
            boundary_mask,
            interior,
        };
        complex.mass = [0, 1, 2, 3].map(|k| complex.assemble_mass(k));
        Ok(complex)
    }

    pub fn mesh(&self) -> &MarkedMesh {
        &self.mesh
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.mesh.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Cells with sorted vertex indices.
    pub fn cells(&self) -> &[[usize; 4]] {
        &self.cells
    }

    pub fn cell_parity(&self) -> &[i32] {
        &self.cell_parity
    }

    pub fn cell_geometry(&self, c: usize) -> &CellGeometry {
        &self.geometry[c]
    }

    /// Number of degree-k entities.
    pub fn count(&self, k: usize) -> usize {
        match k {
            0 => self.mesh.vertices.len(),
            1 => self.edges.len(),
            2 => self.faces.len(),
            3 => self.cells.len(),
            _ => 0,
        }
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&[a.min(b), a.max(b)]).copied()
    }

    pub fn face_index(&self, f: [usize; 3]) -> Option<usize> {
        self.face_index.get(&sort3(f).0).copied()
    }

    /// Integer incidence matrix `Dᵏ` for k ∈ {0, 1, 2}.
    pub fn incidence(&self, k: usize) -> &CsrMatrix<i64> {
        &self.incidence[k]
    }

    /// `Dᵏ` with floating-point entries.
    pub fn d(&self, k: usize) -> &SparseMatrix {
        &self.d[k]
    }

    pub fn mass(&self, k: usize) -> &SparseMatrix {
        &self.mass[k]
    }

    /// Boundary flags for vertices, edges or faces.
    pub fn boundary_mask(&self, k: usize) -> &[bool] {
        &self.boundary_mask[k]
    }

    pub fn boundary_indices(&self, k: usize) -> Vec<usize> {
        (0..self.count(k)).filter(|&i| self.boundary_mask[k][i]).collect()
    }

    /// Indices of interior degree-k entities; every cell is interior.
    pub fn interior_indices(&self, k: usize) -> Vec<usize> {
        if k == 3 {
            (0..self.cells.len()).collect()
        } else {
            self.interior[k].clone()
        }
    }

    /// Mᵏ assembled cell by cell from exact barycentric integrals.
    pub fn assemble_mass(&self, k: usize) -> SparseMatrix {
        let n = self.count(k);
        let mut trip = Vec::new();
        for (ci, c) in self.cells.iter().enumerate() {
            let local = self.geometry[ci].local_mass(k);
            let dofs: Vec<usize> = match k {
                0 => c.to_vec(),
                1 => LOCAL_EDGES.iter().map(|&[i, j]| self.edge_index[&[c[i], c[j]]]).collect(),
                2 => LOCAL_FACES
                    .iter()
                    .map(|&[i, j, l]| self.face_index[&[c[i], c[j], c[l]]])
                    .collect(),
                _ => vec![ci],
            };
            for (a, &ra) in dofs.iter().enumerate() {
                for (b, &rb) in dofs.iter().enumerate() {
                    trip.push((ra, rb, local[a][b]));
                }
            }
        }
        SparseMatrix::from_triplets(n, n, &trip)
    }

    fn check(&self, c: &Cochain) -> Result<()> {
        if c.degree > 3 {
            return Err(Error::DegreeOutOfRange(c.degree));
        }
        let expected = self.count(c.degree);
        if c.values.len() != expected {
            return Err(Error::LengthMismatch {
                degree: c.degree,
                expected,
                got: c.values.len(),
            });
        }
        Ok(())
    }

    /// `Dᵏ c` for a cochain of degree k ≤ 2.
    pub fn apply_d(&self, c: &Cochain) -> Result<Cochain> {
        if c.degree > 2 {
            return Err(Error::DegreeOutOfRange(c.degree));
        }
        self.check(c)?;
        Ok(Cochain::new(c.degree + 1, self.d[c.degree].mul_vec(&c.values)))
    }

    /// Interior entries of a cochain, in the order of [`Self::interior_indices`].
    pub fn restrict_homogeneous(&self, c: &Cochain) -> Result<Vec<f64>> {
        self.check(c)?;
        Ok(self.interior_indices(c.degree).iter().map(|&i| c.values[i]).collect())
    }

    /// Injects interior values, with zero on boundary entities.
    pub fn extend_by_zero(&self, k: usize, interior: &[f64]) -> Result<Cochain> {
        if k > 3 {
            return Err(Error::DegreeOutOfRange(k));
        }
        let idx = self.interior_indices(k);
        if idx.len() != interior.len() {
            return Err(Error::LengthMismatch {
                degree: k,
                expected: idx.len(),
                got: interior.len(),
            });
        }
        let mut values = vec![0.0; self.count(k)];
        for (&i, &v) in idx.iter().zip(interior) {
            values[i] = v;
        }
        Ok(Cochain::new(k, values))
    }

    /// Copy with boundary entries set to zero.
    pub fn zero_boundary(&self, c: &Cochain) -> Result<Cochain> {
        self.check(c)?;
        let mut out = c.clone();
        if c.degree < 3 {
            for (v, &b) in out.values.iter_mut().zip(&self.boundary_mask[c.degree]) {
                if b {
                    *v = 0.0;
                }
            }
        }
        Ok(out)
    }

    /// Local DOF values of a cochain on cell `c`.
    pub fn local_dofs(&self, cochain: &Cochain, c: usize) -> Vec<f64> {
        let cell = self.cells[c];
        match cochain.degree {
            0 => cell.iter().map(|&v| cochain.values[v]).collect(),
            1 => LOCAL_EDGES
                .iter()
                .map(|&[i, j]| cochain.values[self.edge_index[&[cell[i], cell[j]]]])
                .collect(),
            2 => LOCAL_FACES
                .iter()
                .map(|&[i, j, l]| cochain.values[self.face_index[&[cell[i], cell[j], cell[l]]]])
                .collect(),
            _ => vec![cochain.values[c]],
        }
    }

    /// Whitney reconstruction of a 1- or 2-cochain at the barycenter of cell `c`.
    pub fn reconstruct_at_barycenter(&self, cochain: &Cochain, c: usize) -> Result<[f64; 3]> {
        self.check(cochain)?;
        if !(1..=2).contains(&cochain.degree) {
            return Err(Error::DegreeOutOfRange(cochain.degree));
        }
        let dofs = self.local_dofs(cochain, c);
        Ok(self.geometry[c].reconstruct(cochain.degree, &dofs, [0.25; 4]))
    }

    /// `‖c‖` in the Mᵏ norm.
    pub fn mass_norm(&self, c: &Cochain) -> f64 {
        self.mass[c.degree].bilinear(&c.values, &c.values).max(0.0).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meshgen::{generate_canonical, CanonicalDomainSpec, DomainKind};

    fn unit_tet() -> DeRhamComplex {
        let mesh = MarkedMesh::new(
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            vec![[0, 1, 2, 3]],
            None,
            vec![],
            vec![],
        )
        .unwrap();
        DeRhamComplex::new(mesh).unwrap()
    }

    #[test]
    fn single_tet_tables() {
        let c = unit_tet();
        assert_eq!([c.count(0), c.count(1), c.count(2), c.count(3)], [4, 6, 4, 1]);
        let row: Vec<_> = c.incidence(0).row(0).collect();
        assert_eq!(row, vec![(0, -1), (1, 1)]);
        assert!(c.incidence(1).matmul(c.incidence(0)).is_zero());
        assert!(c.incidence(2).matmul(c.incidence(1)).is_zero());
        assert!((c.mass(3).get(0, 0) - 6.0).abs() < 1e-14);
    }

    #[test]
    fn single_edge_value_maps_to_its_faces() {
        let c = unit_tet();
        let mut a = Cochain::zeros(1, 6);
        a.values[0] = 1.0;
        let f = c.apply_d(&a).unwrap();
        // edge (0,1) is the first edge of faces (0,1,2) and (0,1,3)
        assert_eq!(f.values, vec![1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn row_patterns() {
        let m = generate_canonical(&CanonicalDomainSpec::new(DomainKind::BoxWithTunnel, 4)).unwrap();
        let c = DeRhamComplex::new(m).unwrap();
        for (k, nnz) in [(0, 2), (1, 3), (2, 4)] {
            let d = c.incidence(k);
            assert!((0..d.nrows()).all(|r| d.row_len(r) == nnz));
        }
    }

    #[test]
    fn degree_errors() {
        let c = unit_tet();
        assert!(matches!(c.apply_d(&Cochain::zeros(3, 1)), Err(Error::DegreeOutOfRange(3))));
        assert!(matches!(
            c.apply_d(&Cochain::zeros(1, 5)),
            Err(Error::LengthMismatch { expected: 6, got: 5, .. })
        ));
    }

    #[test]
    fn extend_then_restrict_is_identity() {
        let m = generate_canonical(&CanonicalDomainSpec::new(DomainKind::Box, 4)).unwrap();
        let c = DeRhamComplex::new(m).unwrap();
        let n = c.interior_indices(1).len();
        let x: Vec<f64> = (0..n).map(|i| i as f64 * 0.5 - 3.0).collect();
        let back = c.restrict_homogeneous(&c.extend_by_zero(1, &x).unwrap()).unwrap();
        assert_eq!(back, x);
        assert_eq!(n, c.count(1) - c.boundary_indices(1).len());
    }
}
