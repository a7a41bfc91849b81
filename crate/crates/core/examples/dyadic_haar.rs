//! Haar framelets on dyadic partitions of the interval and the square.
//!
//! In one dimension every split is binary, so the system is the classical
//! orthonormal Haar basis. In two dimensions each square has four children
//! and six directional atoms, giving a redundant tight frame.
//!
//! Run with `cargo run --example dyadic_haar`.

use std::sync::Arc;

use adahaar::framelets::{build_system, PwcFunction};
use adahaar::hierarchy::make_dyadic_partition;

fn main() -> adahaar::Result<()> {
    for (d, depth) in [(1, 3), (2, 2)] {
        let p = Arc::new(make_dyadic_partition(d, depth)?);
        let sys = build_system(p.clone(), depth)?;
        println!(
            "dyadic [0,1]^{d}, depth {depth}: {} leaves, {} functions (per level {:?})",
            p.leaves().len(),
            sys.len(),
            sys.counts_by_level()
        );

        // A ramp sampled on the leaves.
        let n = p.leaves().len();
        let values: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let f = PwcFunction::from_dense(p.clone(), &values)?;
        let c = sys.analyze(&f)?;
        println!(
            "  ||f||^2 = {:.12}, sum of squared coefficients = {:.12}",
            f.norm_squared(),
            c.energy()
        );

        let g = sys.synthesize(&c)?;
        println!("  reconstruction error = {:.2e}", g.distance(&f)?);

        let mut largest: Vec<_> = c.iter().collect();
        largest.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()));
        for (key, v) in largest.iter().take(3) {
            println!("  {key}: {v:+.6}");
        }
    }
    Ok(())
}
