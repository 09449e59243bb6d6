//! Writes the tunnel field of a box with a tunnel to `tunnel.vtk` in the
//! given directory (default: current directory).
//!
//!     cargo run --release --example export_vtk -- /tmp

use std::path::PathBuf;

use harmonic_fields::complex::build_complex;
use harmonic_fields::harmonic_normal::normal_harmonic_basis;
use harmonic_fields::harmonic_tangent::{tangent_harmonic_basis, Variant};
use harmonic_fields::io::export_vtk;
use harmonic_fields::meshgen::{generate_canonical, CanonicalDomainSpec, DomainKind};
use harmonic_fields::solvers::SolverConfig;

fn main() -> harmonic_fields::Result<()> {
    let dir = std::env::args().nth(1).map_or_else(|| PathBuf::from("."), PathBuf::from);
    let mesh = generate_canonical(&CanonicalDomainSpec::new(DomainKind::BoxWithTunnel, 6))?;
    let complex = build_complex(&mesh)?;
    let normal = normal_harmonic_basis(&complex, &SolverConfig::default())?;
    let tangent = tangent_harmonic_basis(&complex, &normal, 1e-12, Variant::Full)?;
    let path = dir.join("tunnel.vtk");
    export_vtk(
        &complex,
        "box with tunnel",
        &[("A_1", &tangent.potentials[0]), ("w_1", &tangent.fields[0])],
        &path,
    )?;
    println!("wrote {}", path.display());
    Ok(())
}
