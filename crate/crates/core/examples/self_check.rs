//! Seeded numerical self-checks and the CSV coefficient format.
//!
//! Run with `cargo run --example self_check`.

use std::sync::Arc;

use adahaar::framelets::build_system;
use adahaar::hierarchy::make_dyadic_partition;
use adahaar::io::coefficients_csv;
use adahaar::verify::{random_signals, verify_system};

fn main() -> adahaar::Result<()> {
    let sys = build_system(Arc::new(make_dyadic_partition(2, 2)?), 2)?;
    let report = verify_system(&sys, None, 50, 42)?;
    for check in &report.checks {
        println!("{check}");
    }

    let broken = sys.without(&sys.atoms()[7].key());
    let report = verify_system(&broken, None, 50, 42)?;
    println!(
        "after removing one atom the system passes: {}",
        report.passed()
    );

    let f = &random_signals(&sys, None, 1, 42)?[0];
    let csv = coefficients_csv(&sys.analyze(f)?)?;
    for line in csv.lines().take(5) {
        println!("{line}");
    }
    Ok(())
}
