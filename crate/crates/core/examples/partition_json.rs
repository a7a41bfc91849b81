//! Building a hierarchical partition by hand, catching invalid refinements,
//! and writing the canonical JSON form.
//!
//! Run with `cargo run --example partition_json`.

use adahaar::hierarchy::{tensor_product, Interval, PartitionBuilder, PartitionJson};
use adahaar::io::to_canonical_json;

fn iv(lo: (i64, i64), hi: (i64, i64)) -> Interval {
    Interval::from_ratios(lo, hi).expect("ordered endpoints")
}

fn main() -> adahaar::Result<()> {
    let mut b = PartitionBuilder::new(vec![Interval::unit()]);
    b.start_level();
    let left = b.add(adahaar::hierarchy::BlockId(0), vec![iv((0, 1), (1, 3))]);
    let right = b.add(adahaar::hierarchy::BlockId(0), vec![iv((1, 3), (1, 1))]);
    b.start_level();
    b.add(left, vec![iv((0, 1), (1, 3))]);
    b.add(right, vec![iv((1, 3), (1, 2))]);
    b.add(right, vec![iv((1, 2), (1, 1))]);
    let p = b.build()?;
    println!("{} blocks, depth {}", p.len(), p.depth());
    for &id in p.level(1) {
        let ratios: Vec<String> = p.child_ratios(id).iter().map(|r| r.to_string()).collect();
        println!("  block {id} splits in ratios {}", ratios.join(", "));
    }

    // A gap at the finest level.
    let mut bad = PartitionBuilder::new(vec![Interval::unit()]);
    bad.start_level();
    bad.add(adahaar::hierarchy::BlockId(0), vec![iv((0, 1), (1, 4))]);
    bad.add(adahaar::hierarchy::BlockId(0), vec![iv((1, 2), (1, 1))]);
    for issue in bad.build_unchecked().validate().issues {
        println!("rejected: {issue}");
    }

    let square = tensor_product(&[&p, &p])?;
    println!("tensor square: {} leaves", square.leaves().len());
    print!("{}", to_canonical_json(&PartitionJson::from(&p))?);
    Ok(())
}
