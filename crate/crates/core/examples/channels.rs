//! The left and right channels of a generating set, their complementary
//! outputs, and the ℓ₂ deviation bound behind the entropy estimate.
//!
//! Run with `cargo run --release --example channels`.

use moelab::channels::{
    apply_left, complementary_output, composed_entropy_on_delta, l2_deviation_check, tuple_window, von_neumann_entropy,
    DensityState,
};
use moelab::groups::DEFAULT_BUDGET;
use moelab::GroupSpec;
use rand::SeedableRng;

fn main() -> moelab::Result<()> {
    for n in 2..=4 {
        let g = GroupSpec::free(n);
        let rho = DensityState::identity_delta(&g, 1)?;
        let out = apply_left(&rho, DEFAULT_BUDGET)?;
        let comp = von_neumann_entropy(&complementary_output(&rho, DEFAULT_BUDGET)?)?;
        let composed = composed_entropy_on_delta(&g, DEFAULT_BUDGET)?;
        let nf = n as f64;
        println!(
            "F{n}: H(Φ_l(ξ_e)) = {:.10}, H(Φ_l^c(ξ_e)) = {comp:.10}, H(Φ_l∘Φ_r(ξ_e)) = {composed:.10} (2 ln N − ln N / N = {:.10})",
            out.entropy()?,
            2.0 * nf.ln() - nf.ln() / nf
        );
    }

    let f2 = GroupSpec::free(2);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for k in 1..=2 {
        let basis = tuple_window(&f2, k, 2, DEFAULT_BUDGET)?;
        let rho = DensityState::random(&f2, k, basis, 1, &mut rng)?;
        let r = l2_deviation_check(&rho, 6f64.sqrt(), 1, 1e-9, DEFAULT_BUDGET)?;
        println!(
            "F2, k = {k}: ‖σ − I/N^k‖₂ = {:.6} ≤ {:.6}; H(σ) = {:.6} ≥ −ln tr σ² = {:.6}",
            r.deviation, r.bound, r.entropy, r.renyi2
        );
    }
    Ok(())
}
