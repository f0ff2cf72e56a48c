//! Seeded checks of the product, power and free-product norm inequalities.
//!
//! Run with `cargo run --release --example haagerup_inequalities`.

use moelab::groups::DEFAULT_BUDGET;
use moelab::harmonic::{
    verify_freeprod_inequality, verify_power_inequality, verify_product_inequality, NormOptions, VerificationReport,
    VerifyOptions,
};
use moelab::GroupSpec;

fn show(r: &VerificationReport) {
    println!(
        "{:<13} {:<14} samples {:>5}  max ratio {:.10}  bound {:.10}  {}",
        r.lemma,
        r.group_spec,
        r.samples,
        r.max_ratio,
        r.bound,
        if r.passed { "PASS" } else { "FAIL" }
    );
}

fn main() -> moelab::Result<()> {
    let opts = VerifyOptions {
        trials: 300,
        seed: 7,
        ..VerifyOptions::default()
    };
    let (z5, z7) = (GroupSpec::cyclic(5), GroupSpec::cyclic(7));
    let e = z5.ball(2, DEFAULT_BUDGET)?;
    let f = z7.ball(2, DEFAULT_BUDGET)?;
    let p = 3f64.sqrt();
    show(&verify_product_inequality(&z5, &z7, &e, &f, p, p, &opts)?);

    let z3 = GroupSpec::cyclic(3);
    for m in 0..=3 {
        show(&verify_power_inequality(&z3, 3, m, p, &opts)?);
    }

    let free = VerifyOptions {
        norm: NormOptions {
            radius: 3,
            ..NormOptions::default()
        },
        ..opts
    };
    show(&verify_freeprod_inequality(&[z5.clone(), z5.clone(), z5], &free)?);
    Ok(())
}
