//! Betti numbers by exact modular rank, and the dimensions of the discrete
//! harmonic spaces by SVD.
//!
//!     cargo run --release --example betti_numbers

use harmonic_fields::complex::build_complex;
use harmonic_fields::meshgen::{generate_canonical, CanonicalDomainSpec, DomainKind};
use harmonic_fields::topology::{betti_numbers, euler_characteristic, harmonic_dimension};

fn main() -> harmonic_fields::Result<()> {
    for kind in DomainKind::ALL {
        let mesh = generate_canonical(&CanonicalDomainSpec::new(kind, kind.minimum_resolution()))?;
        let complex = build_complex(&mesh)?;
        let b = betti_numbers(&complex);
        println!(
            "{:<16} betti=({}, {}, {}, {}) chi={} dim h1={} dim h2={}",
            kind.name(),
            b.b0,
            b.b1,
            b.b2,
            b.b3,
            euler_characteristic(&complex),
            harmonic_dimension(&complex, 1)?,
            harmonic_dimension(&complex, 2)?,
        );
    }
    Ok(())
}
