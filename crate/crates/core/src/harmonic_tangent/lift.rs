use crate::complex::{Cochain, DeRhamComplex};
use crate::error::{Error, Result};
use crate::meshgen::{crossing_with, BoundarySurface};
use crate::topology::circulation;

/// A boundary-supported 1-cochain with unit circulation along its own cut
/// boundary and zero surface curl.
#[derive(Clone, Debug)]
pub struct BoundaryLift {
    pub potential: Cochain,
    /// One-based tunnel loop index.
    pub loop_index: usize,
    /// Whether the cut potential was negated to make the diagonal circulation +1.
    pub flipped: bool,
}

/// Surface gradient of a potential that jumps by one across tunnel loop `i`
/// (one-based) on the boundary surface.
pub fn build_boundary_lift(complex: &DeRhamComplex, i: usize) -> Result<BoundaryLift> {
    let mesh = complex.mesh();
    let n = mesh.tunnel_loops.len();
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    let faces = mesh.boundary_components.iter().flatten().copied().collect();
    let surface = BoundarySurface::new(faces);
    let mut jumps = surface.cut_potential_jumps(i, &mesh.tunnel_loops[i - 1])?;
    let own = mesh
        .cut_boundaries
        .get(i - 1)
        .map(|b| crossing_with(&jumps, b))
        .ok_or_else(|| Error::InvalidMarkers(format!("tunnel loop {i} has no cut surface")))?;
    let flipped = match own {
        1 => false,
        -1 => true,
        c => {
            return Err(Error::InvalidMarkers(format!(
                "tunnel loop {i} crosses its own cut boundary {c} times"
            )))
        }
    };
    if flipped {
        jumps.values_mut().for_each(|v| *v = -*v);
    }
    let mut values = vec![0.0; complex.count(1)];
    for (e, v) in jumps {
        let idx = complex.edge_index(e[0], e[1]).ok_or(Error::UnknownEdge(e))?;
        values[idx] = v as f64;
    }
    Ok(BoundaryLift {
        potential: Cochain::new(1, values),
        loop_index: i,
        flipped,
    })
}

/// Exact checks of a lift.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftCheck {
    /// Interior edges with a nonzero value.
    pub interior_support: usize,
    /// Largest `|D¹A^b|` over boundary faces.
    pub max_surface_curl: f64,
    /// Circulation along every cut boundary.
    pub circulations: Vec<f64>,
}

pub fn check_lift(complex: &DeRhamComplex, lift: &BoundaryLift) -> Result<LiftCheck> {
    let a = &lift.potential;
    let interior_support = complex
        .interior_indices(1)
        .iter()
        .filter(|&&e| a.values[e] != 0.0)
        .count();
    let curl = complex.apply_d(a)?;
    let max_surface_curl = complex
        .boundary_indices(2)
        .iter()
        .fold(0.0f64, |m, &f| m.max(curl.values[f].abs()));
    let circulations = complex
        .mesh()
        .cut_boundaries
        .iter()
        .map(|b| circulation(complex, a, b))
        .collect::<Result<_>>()?;
    Ok(LiftCheck {
        interior_support,
        max_surface_curl,
        circulations,
    })
}
