//! Normal forms, products, balls and positive word length.
//!
//! Run with `cargo run --example group_arithmetic`.

use moelab::groups::{Letter, DEFAULT_BUDGET};
use moelab::{Element, GroupSpec};

fn main() -> moelab::Result<()> {
    let z5 = GroupSpec::parse("Z5")?;
    let p = z5.multiply(&Element::Residue(3), &Element::Residue(4))?;
    println!("Z5: 3 + 4 = {}", z5.format_element(&p));

    let f2 = GroupSpec::parse("F2")?;
    let a = Element::Word(vec![Letter::new(0)]);
    let b = Element::Word(vec![Letter::new(1)]);
    let ab = f2.multiply(&a, &b)?;
    let back = f2.multiply(&ab, &f2.inverse(&b)?)?;
    println!("F2: (ab)·b⁻¹ = {}", f2.format_element(&back));

    for spec in ["Z5", "F2", "Z2*Z3", "Z3^2", "freepow(Z5,10^84)"] {
        let g = GroupSpec::parse(spec)?;
        let sizes: Vec<String> = (0..=3)
            .map(|m| match g.ball(m, DEFAULT_BUDGET) {
                Ok(b) => b.len().to_string(),
                Err(_) => "over budget".into(),
            })
            .collect();
        println!("{:<24} |B_0..B_3| = {}", g.canonical(), sizes.join(", "));
    }

    // Inverse letters have no positive expression, so their length is infinite.
    let a_inv = f2.inverse(&a)?;
    println!("|ab|  = {:?}", f2.word_length(&ab, 16, DEFAULT_BUDGET)?);
    println!("|a⁻¹| = {:?}", f2.word_length(&a_inv, 16, DEFAULT_BUDGET)?);

    let g = GroupSpec::parse("Z3*Z4*F1")?;
    let x = g.ball(3, DEFAULT_BUDGET)?.pop().expect("nonempty ball");
    let parts = g.reduced_decomposition(&x)?;
    println!("{} decomposes into {} syllables", g.format_element(&x), parts.len());
    Ok(())
}
