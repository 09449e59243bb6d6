//! Tetrahedral meshes of canonical voxel domains with tunnel loops and cut
//! surfaces.

mod boundary;
mod chains;
mod markers;
mod voxel;

use std::fmt;
use std::str::FromStr;

pub use boundary::{extract_boundary, outward_faces, BoundaryExtraction, BoundarySurface};
pub use chains::{sort3, sort4, EdgeChain, FaceChain, SignedEdge, SignedFace};
pub(crate) use markers::crossing_with;
pub use markers::{validate_markers, ValidationReport};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DomainKind {
    Box,
    BoxWithTunnel,
    BoxWithCavity,
    HollowTorus,
    Fig1Domain,
}

impl DomainKind {
    pub const ALL: [DomainKind; 5] = [
        DomainKind::Box,
        DomainKind::BoxWithTunnel,
        DomainKind::BoxWithCavity,
        DomainKind::HollowTorus,
        DomainKind::Fig1Domain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DomainKind::Box => "box",
            DomainKind::BoxWithTunnel => "box-with-tunnel",
            DomainKind::BoxWithCavity => "box-with-cavity",
            DomainKind::HollowTorus => "hollow-torus",
            DomainKind::Fig1Domain => "fig1",
        }
    }

    pub fn minimum_resolution(self) -> usize {
        voxel::minimum_resolution(self)
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DomainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DomainKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown domain kind `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalDomainSpec {
    pub kind: DomainKind,
    /// Voxels per axis.
    pub resolution: usize,
    pub cell_size: f64,
}

impl CanonicalDomainSpec {
    pub fn new(kind: DomainKind, resolution: usize) -> Self {
        Self {
            kind,
            resolution,
            cell_size: 1.0,
        }
    }

    pub fn with_cell_size(mut self, h: f64) -> Self {
        self.cell_size = h;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let minimum = self.kind.minimum_resolution();
        if self.resolution < minimum {
            return Err(Error::ResolutionTooSmall {
                kind: self.kind.name(),
                resolution: self.resolution,
                minimum,
            });
        }
        if !(self.cell_size.is_finite() && self.cell_size > 0.0) {
            return Err(Error::InvalidSpec(format!("cell size {} must be positive", self.cell_size)));
        }
        Ok(())
    }
}

/// A tetrahedral mesh with the topological markers of its domain.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedMesh {
    pub vertices: Vec<[f64; 3]>,
    /// Positively oriented cells.
    pub tets: Vec<[usize; 4]>,
    /// Outward-oriented boundary faces per component; index 0 is the outer one.
    pub boundary_components: Vec<Vec<[usize; 3]>>,
    pub tunnel_loops: Vec<EdgeChain>,
    pub cut_surfaces: Vec<FaceChain>,
    /// Net boundaries of `cut_surfaces`.
    pub cut_boundaries: Vec<EdgeChain>,
}

impl MarkedMesh {
    /// Assembles a mesh, checking index ranges and cell orientation and
    /// deriving the cut boundaries. Boundary components are recomputed from
    /// the cells when `boundary_components` is `None`.
    pub fn new(
        vertices: Vec<[f64; 3]>,
        tets: Vec<[usize; 4]>,
        boundary_components: Option<Vec<Vec<[usize; 3]>>>,
        tunnel_loops: Vec<EdgeChain>,
        cut_surfaces: Vec<FaceChain>,
    ) -> Result<Self> {
        let nv = vertices.len();
        if vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        let in_range = |v: usize| v < nv;
        for (i, t) in tets.iter().enumerate() {
            if !t.iter().all(|&v| in_range(v)) {
                return Err(Error::NonConformingMesh(format!("cell {i} references a missing vertex")));
            }
            if signed_volume(&vertices, *t) <= 0.0 {
                return Err(Error::NonConformingMesh(format!("cell {i} is not positively oriented")));
            }
        }
        let bad_marker = tunnel_loops.iter().flat_map(|l| l.edges.iter().flat_map(|e| e.vertices)).any(|v| !in_range(v))
            || cut_surfaces.iter().flat_map(|s| s.faces.iter().flat_map(|f| f.vertices)).any(|v| !in_range(v));
        if bad_marker {
            return Err(Error::InvalidMarkers("marker references a missing vertex".into()));
        }
        let boundary_components = match boundary_components {
            Some(c) => c,
            None => {
                let b = extract_boundary(&vertices, &tets)?;
                (0..b.components.len()).map(|i| b.component_faces(i)).collect()
            }
        };
        let cut_boundaries = cut_surfaces.iter().map(FaceChain::boundary).collect();
        Ok(Self {
            vertices,
            tets,
            boundary_components,
            tunnel_loops,
            cut_surfaces,
            cut_boundaries,
        })
    }

    pub fn total_volume(&self) -> f64 {
        self.tets.iter().map(|&t| signed_volume(&self.vertices, t)).sum()
    }

    /// Sorted vertex indices of boundary component `i`.
    pub fn component_vertices(&self, i: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.boundary_components[i].iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Reverses tunnel loop `i` (zero-based).
    pub fn reverse_loop(&mut self, i: usize) {
        self.tunnel_loops[i] = self.tunnel_loops[i].reversed();
    }
}

pub fn signed_volume(vertices: &[[f64; 3]], t: [usize; 4]) -> f64 {
    let p = t.map(|i| vertices[i]);
    let u = sub(p[1], p[0]);
    let v = sub(p[2], p[0]);
    let w = sub(p[3], p[0]);
    dot(u, cross(v, w)) / 6.0
}

pub fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn generate_canonical(spec: &CanonicalDomainSpec) -> Result<MarkedMesh> {
    spec.validate()?;
    let n = spec.resolution;
    let h = spec.cell_size;
    let dom = voxel::build(spec.kind, n);

    let m = n + 1;
    let flat = |p: [usize; 3]| (p[0] * m + p[1]) * m + p[2];
    let mut used = vec![false; m * m * m];
    let mut voxels = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if dom.is_solid(x, y, z) {
                    voxels.push([x, y, z]);
                    for d in 0..8 {
                        used[flat([x + (d & 1), y + ((d >> 1) & 1), z + (d >> 2)])] = true;
                    }
                }
            }
        }
    }
    let mut index = vec![usize::MAX; m * m * m];
    let mut vertices = Vec::new();
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                if used[flat([x, y, z])] {
                    index[flat([x, y, z])] = vertices.len();
                    vertices.push([x as f64 * h, y as f64 * h, z as f64 * h]);
                }
            }
        }
    }
    let id = |p: [usize; 3]| index[flat(p)];
    let tets: Vec<[usize; 4]> = voxels
        .iter()
        .flat_map(|&p| voxel::kuhn_tets(p).map(|t| t.map(id)))
        .collect();

    let loops: Vec<EdgeChain> = dom
        .loops
        .iter()
        .map(|walk| EdgeChain::closed_walk(&walk.iter().map(|&p| id(p)).collect::<Vec<_>>()))
        .collect();
    let surfaces: Vec<FaceChain> = dom
        .surfaces
        .iter()
        .map(|squares| {
            FaceChain::new(
                squares
                    .iter()
                    .flat_map(|s| {
                        voxel::square_triangles(s).map(|[a, b, c]| {
                            let f = SignedFace::oriented(id(a), id(b), id(c));
                            if s.sign < 0 {
                                f.negated()
                            } else {
                                f
                            }
                        })
                    })
                    .collect(),
            )
        })
        .collect();

    let mut mesh = MarkedMesh::new(vertices, tets, None, loops, surfaces)?;
    let report = validate_markers(&mesh);
    for i in 0..mesh.tunnel_loops.len() {
        if report.crossing.get(i).and_then(|r| r.get(i)) == Some(&-1) {
            mesh.reverse_loop(i);
        }
    }
    let report = validate_markers(&mesh);
    if !report.passed {
        return Err(Error::InvalidMarkers(report.problems.join("; ")));
    }
    Ok(mesh)
}
