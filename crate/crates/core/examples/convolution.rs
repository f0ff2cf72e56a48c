//! Group-algebra convolution and compressions of `λ(f)`.
//!
//! Run with `cargo run --example convolution`.

use moelab::groups::DEFAULT_BUDGET;
use moelab::harmonic::{compression, convolve, AlgebraElement};
use moelab::{Element, GroupSpec, C64};

fn main() -> moelab::Result<()> {
    let z5 = GroupSpec::cyclic(5);
    let one = C64::new(1.0, 0.0);
    let f = AlgebraElement::from_terms(&z5, [(Element::Residue(1), one), (Element::Residue(2), one)])?;
    let psi = AlgebraElement::delta(&z5, Element::Residue(4))?;
    let h = convolve(&f, &psi)?;
    for (g, c) in h.terms() {
        println!("(f * ψ)({g}) = {c}");
    }

    // On a finite group the compression is the whole operator: a circulant matrix.
    let shift = compression(&AlgebraElement::delta(&z5, Element::Residue(1))?, 0, DEFAULT_BUDGET)?;
    println!("λ(δ_1) on Z5 =\n{}", shift.matrix.map(|z| z.re));

    // On F2 compressions grow with the window and their norms increase.
    let f2 = GroupSpec::free(2);
    let b1 = f2.ball(1, DEFAULT_BUDGET)?;
    let u = AlgebraElement::indicator(&f2, &b1)?.normalized();
    for r in 1..=5 {
        let c = compression(&u, r, DEFAULT_BUDGET)?;
        println!(
            "R = {r}: dim {:>3}, ‖P λ(u) P‖ = {:.8}",
            c.basis.len(),
            c.spectral_norm()
        );
    }
    Ok(())
}
