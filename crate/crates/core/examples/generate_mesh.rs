//! Generates every canonical domain at its smallest resolution and prints
//! entity counts and marker validation.
//!
//!     cargo run --example generate_mesh

use harmonic_fields::complex::build_complex;
use harmonic_fields::meshgen::{generate_canonical, validate_markers, CanonicalDomainSpec, DomainKind};

fn main() -> harmonic_fields::Result<()> {
    for kind in DomainKind::ALL {
        let spec = CanonicalDomainSpec::new(kind, kind.minimum_resolution());
        let mesh = generate_canonical(&spec)?;
        let complex = build_complex(&mesh)?;
        let report = validate_markers(&mesh);
        println!(
            "{:<16} n={:<2} V={:<5} E={:<6} F={:<6} T={:<5} components={} loops={} crossing={:?}",
            kind.name(),
            spec.resolution,
            complex.count(0),
            complex.count(1),
            complex.count(2),
            complex.count(3),
            mesh.boundary_components.len(),
            mesh.tunnel_loops.len(),
            report.crossing,
        );
    }
    Ok(())
}
