//! The full directed-graph pipeline: symmetrize, coarse-grain both graphs,
//! embed the vertices as rectangles in the unit square, then build, restrict
//! and prune the framelet system.
//!
//! Run with `cargo run --example digraph_pipeline`.

use adahaar::embedding::{
    digraph_embedding, graph_frame_bounds, prune_redundant, restrict_system, PruneScope,
};
use adahaar::framelets::build_system;
use adahaar::graphs::{build_chain, Clustering, Digraph, ExplicitClusterer};
use nalgebra::DMatrix;

fn groups(steps: &[(&[&[usize]], usize)]) -> adahaar::Result<ExplicitClusterer> {
    let clusterings = steps
        .iter()
        .map(|(g, n)| Clustering::from_groups(g.iter().map(|c| c.to_vec()).collect(), *n))
        .collect::<adahaar::Result<Vec<_>>>()?;
    Ok(ExplicitClusterer::new(clusterings))
}

fn main() -> adahaar::Result<()> {
    let labels: Vec<String> = ["a", "b", "c", "d", "e", "f"].map(String::from).to_vec();
    let mut w = DMatrix::zeros(6, 6);
    for (u, v) in [(0, 1), (2, 0), (2, 3), (2, 5), (3, 4), (4, 2)] {
        w[(u, v)] = 1.0;
    }
    let g = Digraph::new(labels, w)?;
    let (gx, gy) = g.symmetrize();
    for (name, graph) in [("W^x", &gx), ("W^y", &gy)] {
        println!("{name}:");
        for u in 0..graph.len() {
            let row: Vec<String> = (0..graph.len())
                .map(|v| graph.weight(u, v).to_string())
                .collect();
            println!("  {} | {}", graph.labels()[u], row.join(" "));
        }
    }

    let mut cx = groups(&[(&[&[0, 1], &[2, 3, 4], &[5]], 6), (&[&[0], &[1, 2]], 3)])?;
    let mut cy = groups(&[(&[&[0, 1, 3], &[2, 4], &[5]], 6), (&[&[0], &[1, 2]], 3)])?;
    let chain_x = build_chain(gx, &mut cx, 3)?;
    let chain_y = build_chain(gy, &mut cy, 3)?;

    let e = digraph_embedding(&g, &chain_x, &chain_y)?;
    for (label, b) in e.vertex_blocks.iter() {
        let sides = e.partition.block(b).sides();
        println!("B_{label} = {} x {}  (block {b})", sides[0], sides[1]);
    }

    let full = build_system(e.partition.clone(), 3)?;
    let restricted = restrict_system(&full, &e.vertex_blocks);
    let pruned = prune_redundant(&restricted, &e.vertex_blocks, PruneScope::FinestLevel)?;
    let (bounds, rank) = graph_frame_bounds(&restricted, &e.vertex_blocks)?;
    println!(
        "full       {:3} functions, per level {:?}",
        full.len(),
        full.counts_by_level()
    );
    println!(
        "restricted {:3} functions, frame bounds [{:.6}, {:.6}], rank {rank}",
        restricted.len(),
        bounds.lower,
        bounds.upper
    );
    println!(
        "pruned     {:3} functions, frame bounds [{:.6}, {:.6}], rank {}",
        pruned.system.len(),
        pruned.bounds.lower,
        pruned.bounds.upper,
        pruned.rank
    );
    Ok(())
}
