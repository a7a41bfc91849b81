//! Plugging a user-defined clustering rule into chain construction.
//!
//! The rule here merges vertices in consecutive pairs, which on a path graph
//! gives a binary hierarchy and hence an orthonormal system on the vertices.
//!
//! Run with `cargo run --example custom_clusterer`.

use std::sync::Arc;

use adahaar::embedding::{
    chain_to_intervals, graph_frame_bounds, interval_vertex_blocks, restrict_system,
};
use adahaar::framelets::build_system;
use adahaar::graphs::{build_chain, default_cluster, Clusterer, Clustering, Graph};

struct PairUp;

impl Clusterer for PairUp {
    fn cluster(&mut self, g: &Graph, _step: usize) -> adahaar::Result<Clustering> {
        Clustering::from_assignment((0..g.len()).map(|v| v / 2).collect())
    }
}

fn main() -> adahaar::Result<()> {
    let n = 8;
    let edges: Vec<(usize, usize, f64)> = (0..n - 1).map(|i| (i, i + 1, 1.0 + i as f64)).collect();
    let g = Graph::from_edges((0..n).map(|i| format!("v{i}")).collect::<Vec<_>>(), &edges)?;

    let chain = build_chain(g.clone(), &mut PairUp, 16)?;
    let sizes: Vec<usize> = chain.graphs().iter().map(Graph::len).collect();
    println!("pairing chain: {sizes:?}");

    let e = chain_to_intervals(&chain)?;
    let vbm = interval_vertex_blocks(&chain, &e);
    let p = Arc::new(e.into_partition());
    let sys = restrict_system(&build_system(p.clone(), chain.depth())?, &vbm);
    let (bounds, rank) = graph_frame_bounds(&sys, &vbm)?;
    println!(
        "{} functions for {} vertices, bounds [{:.6}, {:.6}], rank {rank}",
        sys.len(),
        n,
        bounds.lower,
        bounds.upper
    );
    for &leaf in p.leaves() {
        println!("  leaf {leaf}: {}", p.block(leaf).sides()[0]);
    }

    // The built-in greedy rule for comparison.
    let greedy = default_cluster(&g, 4);
    println!("greedy clusters at target 4: {:?}", greedy.clusters());
    Ok(())
}
