//! Upper bounds on the minimum output entropy of `Φ_l^c` over growing windows.
//!
//! Run with `cargo run --release --example minimum_output_entropy`.

use moelab::channels::{moe_sweep, MoeOptions};
use moelab::GroupSpec;

fn main() -> moelab::Result<()> {
    let opts = MoeOptions {
        restarts: 16,
        seed: 11,
        ..MoeOptions::default()
    };
    for spec in ["F2", "F3"] {
        let g = GroupSpec::parse(spec)?;
        for r in moe_sweep(&g, &[1, 2, 3], 1, &opts)? {
            println!(
                "{spec} R = {} window {:>3}: {:.10} nats (restart {}, converged {})",
                r.radius, r.window_size, r.best_value, r.best_restart, r.converged
            );
        }
    }
    let f2 = GroupSpec::free(2);
    let r = moe_sweep(&f2, &[1, 2], 2, &opts)?;
    let last = r.last().expect("two radii");
    println!(
        "F2 k = 2 R = 2: {:.10} nats on {} basis tuples",
        last.best_value, last.window_size
    );
    Ok(())
}
