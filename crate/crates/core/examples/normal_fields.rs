//! Normal harmonic fields on the domain with two cavities and their duality
//! matrix against the cavity indicators.
//!
//!     cargo run --release --example normal_fields

use harmonic_fields::complex::build_complex;
use harmonic_fields::harmonic_normal::{normal_harmonic_basis, normal_membership};
use harmonic_fields::meshgen::{generate_canonical, CanonicalDomainSpec, DomainKind};
use harmonic_fields::solvers::SolverConfig;

fn main() -> harmonic_fields::Result<()> {
    let mesh = generate_canonical(&CanonicalDomainSpec::new(DomainKind::Fig1Domain, 8))?;
    let complex = build_complex(&mesh)?;
    let basis = normal_harmonic_basis(&complex, &SolverConfig::with_tolerance(1e-12))?;
    println!("G =");
    for row in &basis.duality {
        println!("  {row:?}");
    }
    for (i, v) in basis.fields.iter().enumerate() {
        let m = normal_membership(&complex, v)?;
        println!(
            "v_{}: cg iterations {}, boundary {:e}, curl {:e}, weak divergence {:e}",
            i + 1,
            basis.iterations[i],
            m.max_boundary_dof,
            m.max_curl,
            m.weak_divergence
        );
    }
    Ok(())
}
