//! Interval-arithmetic certificates for the main theorem and the free-product
//! corollary, plus the threshold constant κ_N.
//!
//! Run with `cargo run --example certificates`.

use moelab::certify::{certify_free_product, certify_main_theorem, kappa, CertifyOptions};
use moelab::groups::parse_bigint;
use moelab::harmonic::{ball2_constant, NormOptions};
use moelab::GroupSpec;

fn main() -> moelab::Result<()> {
    for n in ["2", "3", "5", "10^10", "10^84"] {
        println!("κ_{n} ∈ {}", kappa(&parse_bigint(n)?, 256)?);
    }

    let opts = CertifyOptions::default();
    for spec in ["F10000000000", "F2"] {
        let g = GroupSpec::parse(spec)?;
        let q = ball2_constant(&g, &NormOptions::default())?;
        let cert = certify_main_theorem(&g, &q, &opts)?;
        report(spec, &cert);
    }

    for copies in ["10^83", "10^84"] {
        let factors = [(GroupSpec::cyclic(5), parse_bigint(copies)?)];
        let cert = certify_free_product(1, &factors, &opts)?;
        report(&format!("freepow(Z5,{copies})"), &cert);
    }
    Ok(())
}

fn report(label: &str, cert: &moelab::certify::Certificate) {
    match (&cert.gap, &cert.failed_check) {
        (Some(gap), None) => println!("{label}: {:?}, gap ∈ {gap} nats", cert.verdict),
        (_, failed) => println!("{label}: {:?} at {}", cert.verdict, failed.as_deref().unwrap_or("gap")),
    }
}
