use std::collections::{BTreeMap, HashMap};

use super::boundary::{extract_boundary, outward_faces, BoundarySurface};
use super::chains::{sort3, EdgeChain};
use super::MarkedMesh;

/// Outcome of checking tunnel loops and cut surfaces. Failures are recorded,
/// never raised.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub loops_closed: Vec<bool>,
    pub loops_on_boundary: Vec<bool>,
    pub cut_boundaries_closed: Vec<bool>,
    pub cut_boundaries_on_boundary: Vec<bool>,
    pub cut_surfaces_interior: Vec<bool>,
    /// No boundary edge joins two loop vertices without being a loop edge.
    pub chord_condition: Vec<bool>,
    /// `crossing[i][j]`: signed crossings of loop `i` with `∂Σ_j`.
    pub crossing: Vec<Vec<i64>>,
    pub problems: Vec<String>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn crossing_is_identity(&self) -> bool {
        self.crossing.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, &c)| c == if i == j { 1 } else { 0 })
        })
    }
}

/// Signed crossing of a cut-potential jump map with an edge chain.
pub(crate) fn crossing_with(jumps: &BTreeMap<[usize; 2], i32>, chain: &EdgeChain) -> i64 {
    chain
        .edges
        .iter()
        .map(|e| e.coeff as i64 * jumps.get(&e.vertices).copied().unwrap_or(0) as i64)
        .sum()
}

pub fn validate_markers(mesh: &MarkedMesh) -> ValidationReport {
    let mut report = ValidationReport::default();
    let boundary = match extract_boundary(&mesh.vertices, &mesh.tets) {
        Ok(b) => b,
        Err(e) => {
            report.problems.push(format!("boundary extraction failed: {e}"));
            return report;
        }
    };
    let surface = BoundarySurface::new(boundary.faces.clone());

    let mut face_cells: HashMap<[usize; 3], usize> = HashMap::new();
    for &t in &mesh.tets {
        for f in outward_faces(t) {
            *face_cells.entry(sort3(f).0).or_insert(0) += 1;
        }
    }

    let n_loops = mesh.tunnel_loops.len();
    if mesh.cut_surfaces.len() != n_loops {
        report.problems.push(format!(
            "{} tunnel loops but {} cut surfaces",
            n_loops,
            mesh.cut_surfaces.len()
        ));
    }

    for (i, l) in mesh.tunnel_loops.iter().enumerate() {
        let closed = l.is_closed() && !l.is_empty();
        let on = l.edges.iter().all(|e| surface.has_edge(e.vertices));
        if !closed {
            report.problems.push(format!("tunnel loop {} is not closed", i + 1));
        }
        if !on {
            report.problems.push(format!("tunnel loop {} leaves the boundary", i + 1));
        }
        report.loops_closed.push(closed);
        report.loops_on_boundary.push(on);
    }
    for (j, (s, b)) in mesh.cut_surfaces.iter().zip(&mesh.cut_boundaries).enumerate() {
        let closed = b.is_closed() && !b.is_empty();
        let on = b.edges.iter().all(|e| surface.has_edge(e.vertices));
        let interior = !s.is_empty() && s.faces.iter().all(|f| face_cells.get(&f.vertices) == Some(&2));
        if !closed {
            report.problems.push(format!("boundary of cut surface {} is not closed", j + 1));
        }
        if !on {
            report.problems.push(format!("boundary of cut surface {} leaves the boundary", j + 1));
        }
        if !interior {
            report.problems.push(format!("cut surface {} uses a non-interior face", j + 1));
        }
        report.cut_boundaries_closed.push(closed);
        report.cut_boundaries_on_boundary.push(on);
        report.cut_surfaces_interior.push(interior);
    }

    for (i, l) in mesh.tunnel_loops.iter().enumerate() {
        let mut row = vec![0i64; mesh.cut_boundaries.len()];
        match surface.cut_potential_jumps(i + 1, l) {
            Ok(jumps) => {
                report.chord_condition.push(true);
                for (j, b) in mesh.cut_boundaries.iter().enumerate() {
                    row[j] = crossing_with(&jumps, b);
                }
            }
            Err(e) => {
                report.chord_condition.push(!matches!(e, crate::Error::ChordViolation { .. }));
                report.problems.push(e.to_string());
            }
        }
        report.crossing.push(row);
    }

    if !report.crossing_is_identity() {
        report.problems.push(format!("crossing matrix {:?} is not the identity", report.crossing));
    }
    report.passed = report.problems.is_empty();
    report
}
