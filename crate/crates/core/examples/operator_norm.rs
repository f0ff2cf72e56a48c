//! Two-sided operator-norm bounds and the registered Haagerup constants of `B₂`.
//!
//! Run with `cargo run --release --example operator_norm`.

use moelab::groups::DEFAULT_BUDGET;
use moelab::harmonic::{ball2_constant, operator_norm, AlgebraElement, NormOptions};
use moelab::GroupSpec;

fn main() -> moelab::Result<()> {
    let opts = NormOptions {
        radius: 4,
        ..NormOptions::default()
    };
    for spec in ["Z5", "Z7", "Z3*Z4", "F2", "F3"] {
        let g = GroupSpec::parse(spec)?;
        let ball = g.ball(2, DEFAULT_BUDGET)?;
        let f = AlgebraElement::indicator(&g, &ball)?.normalized();
        let b = operator_norm(&f, &opts)?;
        println!(
            "{spec:<6} uniform on B₂: {:.8} ({}) ≤ ‖λ(f)‖ ≤ {:.8} ({})",
            b.lower, b.lower_method, b.upper, b.upper_method
        );
    }

    for spec in ["Z5", "F2", "F10000000000", "freepow(Z5,10^84)"] {
        let g = GroupSpec::parse(spec)?;
        let p = ball2_constant(&g, &opts)?;
        let exact = p.exact_upper_squared.map(|k| format!(" = √{k}")).unwrap_or_default();
        println!("{:<20} p = {:.6}{exact} via {}", g.canonical(), p.upper, p.upper_method);
    }
    Ok(())
}
