//! Full verification of the domain with two tunnels and two cavities, as run
//! by `harmonic verify --domain fig1`.
//!
//!     cargo run --release --example verify_fig1 -- 8

use harmonic_fields::complex::build_complex;
use harmonic_fields::io::{run_verification, VerifyConfig};
use harmonic_fields::meshgen::{generate_canonical, CanonicalDomainSpec, DomainKind};

fn main() -> harmonic_fields::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let mesh = generate_canonical(&CanonicalDomainSpec::new(DomainKind::Fig1Domain, n))?;
    let complex = build_complex(&mesh)?;
    let run = run_verification(&complex, Some(DomainKind::Fig1Domain), &VerifyConfig::default())?;
    print!("{}", run.report.render());
    if !run.report.passed() {
        std::process::exit(1);
    }
    Ok(())
}
