//! Pair multiplicity, girth, minimality and the involution test on `B₂`.
//!
//! Run with `cargo run --example combinatorial_constants`.

use moelab::combinatorics::{
    ball2_has_involution, girth, is_minimal_generating_set, pair_multiplicity, pair_multiplicity_free_product,
};
use moelab::groups::{FreeFactor, DEFAULT_BUDGET};
use moelab::GroupSpec;
use num_bigint::BigUint;

fn main() -> moelab::Result<()> {
    println!(
        "{:<14} {:>3} {:>10} {:>8} {:>10}",
        "group", "𝔑", "girth", "minimal", "inv in B₂"
    );
    for spec in ["Z5", "Z4", "Z4[1,2,3]", "Z7[1,2]", "F3", "Z2^3", "Z5*Z5"] {
        let g = GroupSpec::parse(spec)?;
        let n = pair_multiplicity(&g, DEFAULT_BUDGET)?;
        let girth = girth(&g, 32, DEFAULT_BUDGET)?;
        let minimal = is_minimal_generating_set(&g, DEFAULT_BUDGET)
            .map(|b| b.to_string())
            .unwrap_or_else(|_| "n/a".into());
        let inv = ball2_has_involution(&g, DEFAULT_BUDGET)
            .map(|b| b.to_string())
            .unwrap_or_else(|_| "n/a".into());
        let girth = match girth.value.value() {
            Some(v) => v.to_string(),
            None => "> 32".into(),
        };
        println!("{spec:<14} {:>3} {girth:>10} {minimal:>8} {inv:>10}", n.value);
    }

    // Free products take the maximum over factors, whatever the multiplicities.
    let factor = FreeFactor {
        group: GroupSpec::parse("Z4[1,2,3]")?,
        copies: BigUint::from(3u32),
    };
    let report = pair_multiplicity_free_product(&[factor], DEFAULT_BUDGET)?;
    println!("𝔑 of 3 copies of Z4[1,2,3]: {}", report.value);
    Ok(())
}
