//! Legacy ASCII VTK export of a mesh with cochain attributes.

use std::fmt::Write as _;
use std::path::Path;

use crate::complex::{Cochain, DeRhamComplex};
use crate::error::{Error, Result};

/// VTK cell type of a linear tetrahedron.
pub const VTK_TETRA: u8 = 10;

/// Renders the mesh of `complex` with `fields` attached in the given order.
///
/// 0-cochains become point scalars, 1- and 2-cochains cell vectors sampled
/// at barycenters, and 3-cochains cell scalars divided by cell volume.
pub fn write_vtk(complex: &DeRhamComplex, title: &str, fields: &[(&str, &Cochain)]) -> Result<String> {
    for (name, c) in fields {
        if c.degree > 3 {
            return Err(Error::DegreeOutOfRange(c.degree));
        }
        if c.values.len() != complex.count(c.degree) {
            return Err(Error::MismatchedComplex(format!(
                "field `{name}` has {} values for {} entities",
                c.values.len(),
                complex.count(c.degree)
            )));
        }
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(Error::InvalidSpec(format!("invalid VTK field name `{name}`")));
        }
    }
    let mesh = complex.mesh();
    let mut s = String::new();
    let _ = writeln!(s, "# vtk DataFile Version 2.0");
    let _ = writeln!(s, "{}", title.lines().next().unwrap_or("harmonic"));
    let _ = writeln!(s, "ASCII");
    let _ = writeln!(s, "DATASET UNSTRUCTURED_GRID");
    let _ = writeln!(s, "POINTS {} double", mesh.vertices.len());
    for p in &mesh.vertices {
        let _ = writeln!(s, "{} {} {}", p[0], p[1], p[2]);
    }
    let nt = mesh.tets.len();
    let _ = writeln!(s, "CELLS {nt} {}", 5 * nt);
    for t in &mesh.tets {
        let _ = writeln!(s, "4 {} {} {} {}", t[0], t[1], t[2], t[3]);
    }
    let _ = writeln!(s, "CELL_TYPES {nt}");
    for _ in 0..nt {
        let _ = writeln!(s, "{VTK_TETRA}");
    }

    let points: Vec<_> = fields.iter().filter(|(_, c)| c.degree == 0).collect();
    if !points.is_empty() {
        let _ = writeln!(s, "POINT_DATA {}", mesh.vertices.len());
        for (name, c) in points {
            let _ = writeln!(s, "SCALARS {name} double 1");
            let _ = writeln!(s, "LOOKUP_TABLE default");
            for v in &c.values {
                let _ = writeln!(s, "{v}");
            }
        }
    }
    let cells: Vec<_> = fields.iter().filter(|(_, c)| c.degree > 0).collect();
    if !cells.is_empty() {
        let _ = writeln!(s, "CELL_DATA {nt}");
        for (name, c) in cells {
            if c.degree == 3 {
                let _ = writeln!(s, "SCALARS {name} double 1");
                let _ = writeln!(s, "LOOKUP_TABLE default");
                for (t, v) in c.values.iter().enumerate() {
                    let _ = writeln!(s, "{}", v / complex.cell_geometry(t).volume);
                }
            } else {
                let _ = writeln!(s, "VECTORS {name} double");
                for t in 0..nt {
                    let u = complex.reconstruct_at_barycenter(c, t)?;
                    let _ = writeln!(s, "{} {} {}", u[0], u[1], u[2]);
                }
            }
        }
    }
    Ok(s)
}

pub fn export_vtk(
    complex: &DeRhamComplex,
    title: &str,
    fields: &[(&str, &Cochain)],
    path: impl AsRef<Path>,
) -> Result<()> {
    std::fs::write(path, write_vtk(complex, title, fields)?)?;
    Ok(())
}
