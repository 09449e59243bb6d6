//! Solves the tangent correction once against the normal harmonic fields and
//! once against gradients of the cavity indicators, and compares them.
//!
//!     cargo run --release --example simplified_problem

use harmonic_fields::complex::build_complex;
use harmonic_fields::harmonic_normal::normal_harmonic_basis;
use harmonic_fields::harmonic_tangent::{tangent_harmonic_basis, Variant};
use harmonic_fields::io::pipeline::equivalence_gap;
use harmonic_fields::meshgen::{generate_canonical, CanonicalDomainSpec, DomainKind};
use harmonic_fields::solvers::SolverConfig;

fn main() -> harmonic_fields::Result<()> {
    let mesh = generate_canonical(&CanonicalDomainSpec::new(DomainKind::Fig1Domain, 8))?;
    let complex = build_complex(&mesh)?;
    let normal = normal_harmonic_basis(&complex, &SolverConfig::with_tolerance(1e-12))?;
    let full = tangent_harmonic_basis(&complex, &normal, 1e-12, Variant::Full)?;
    let simplified = tangent_harmonic_basis(&complex, &normal, 1e-12, Variant::Simplified)?;
    println!("relative M1 gap between variants: {:e}", equivalence_gap(&complex, &full, &simplified));
    for (a, b) in full.fields.iter().zip(&simplified.fields) {
        let diff = a.values.iter().zip(&b.values).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        println!("max field difference: {diff:e}");
    }
    Ok(())
}
