//! Tangent harmonic fields of the hollow torus, whose two cut surfaces
//! intersect. Prints the flux matrix and the saddle multipliers.
//!
//!     cargo run --release --example tangent_fields

use harmonic_fields::complex::build_complex;
use harmonic_fields::harmonic_normal::normal_harmonic_basis;
use harmonic_fields::harmonic_tangent::{tangent_harmonic_basis, verify_membership, Variant};
use harmonic_fields::meshgen::{generate_canonical, CanonicalDomainSpec, DomainKind};
use harmonic_fields::solvers::SolverConfig;

fn main() -> harmonic_fields::Result<()> {
    let mesh = generate_canonical(&CanonicalDomainSpec::new(DomainKind::HollowTorus, 8))?;
    let complex = build_complex(&mesh)?;
    let normal = normal_harmonic_basis(&complex, &SolverConfig::with_tolerance(1e-12))?;
    let tangent = tangent_harmonic_basis(&complex, &normal, 1e-12, Variant::Full)?;
    println!("F =");
    for row in &tangent.flux {
        println!("  {row:?}");
    }
    for (i, (w, c)) in tangent.fields.iter().zip(&tangent.corrections).enumerate() {
        let m = verify_membership(&complex, w)?;
        println!(
            "w_{}: |sigma| {:e}, |p| {:e}, divergence {:e}, orthogonality {:e}",
            i + 1,
            c.sigma_norm,
            c.p_norm,
            m.max_divergence,
            m.orthogonality
        );
    }
    Ok(())
}
