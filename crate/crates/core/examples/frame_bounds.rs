//! Frame bounds of framelet families.
//!
//! A complete system is a Parseval frame (both bounds 1). Dropping atoms
//! from a binary split loses information and the lower bound falls to 0,
//! while dropping one of the redundant atoms of a 2-D split keeps a frame
//! with lower bound strictly between 0 and 1.
//!
//! Run with `cargo run --example frame_bounds`.

use std::sync::Arc;

use adahaar::framelets::{build_system, frame_bounds, leaf_basis, FrameletSystem};
use adahaar::hierarchy::make_dyadic_partition;

fn report(name: &str, sys: &FrameletSystem) -> adahaar::Result<()> {
    let space = leaf_basis(sys.partition());
    let space: Vec<_> = space.iter().collect();
    let b = frame_bounds(&sys.functions().collect::<Vec<_>>(), &space)?;
    println!(
        "{name:<28} {:3} functions  bounds [{:.6}, {:.6}]  tight: {}",
        sys.len(),
        b.lower,
        b.upper,
        b.is_tight_parseval(1e-9)
    );
    Ok(())
}

fn main() -> adahaar::Result<()> {
    let line = build_system(Arc::new(make_dyadic_partition(1, 3)?), 3)?;
    report("interval, complete", &line)?;
    let g = line.gram_matrix();
    let off = (g.clone() - nalgebra::DMatrix::identity(g.nrows(), g.ncols()))
        .abs()
        .max();
    println!("  gram matrix differs from the identity by {off:.1e}");
    report(
        "interval, one atom removed",
        &line.without(&line.atoms()[2].key()),
    )?;

    let square = build_system(Arc::new(make_dyadic_partition(2, 1)?), 1)?;
    report("square, complete", &square)?;
    report(
        "square, one atom removed",
        &square.without(&square.atoms()[0].key()),
    )?;
    let thinned = square.retain(|a| a.pair().0 == 1);
    report("square, pairs with child 1", &thinned)?;
    Ok(())
}
