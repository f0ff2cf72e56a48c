//! Driving the command-line front end in-process and reading its JSON report.
//!
//! Run with `cargo run --example cli_reports`.

use moelab::cli::run_with;

fn main() {
    let argv = ["moelab", "constants", "--G", "Z4[1,2,3]"];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    let report: serde_json::Value = serde_json::from_slice(&out).expect("JSON report");
    println!("exit {code}: {}", String::from_utf8_lossy(&err).trim());
    println!(
        "𝔑 = {}, witness {}",
        report["pair_multiplicity"]["value"], report["pair_multiplicity"]["witness"]
    );

    let argv = ["moelab", "group", "info", "--G", "Z5*(F2"];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    println!("exit {code}:\n{}", String::from_utf8_lossy(&err));
}
