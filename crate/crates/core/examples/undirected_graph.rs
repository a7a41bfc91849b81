//! A six-vertex undirected graph: coarse-grain it into a chain, map the chain
//! to nested intervals of [0,1], and analyze a vertex signal.
//!
//! Run with `cargo run --example undirected_graph`.

use std::sync::Arc;

use adahaar::embedding::{
    chain_to_intervals, interval_vertex_blocks, restrict_system, signal_to_function,
};
use adahaar::framelets::build_system;
use adahaar::graphs::{build_chain, Clustering, ExplicitClusterer, Graph};

fn main() -> adahaar::Result<()> {
    let g = Graph::from_edges(
        ["a", "b", "c", "d", "e", "f"],
        &[
            (0, 1, 1.0),
            (0, 2, 1.0),
            (2, 3, 1.0),
            (2, 4, 1.0),
            (2, 5, 1.0),
            (3, 4, 1.0),
        ],
    )?;
    println!("degrees: {:?}", g.degrees());

    // {a,b} {c,d,e} {f}, then {a,b} {c,d,e,f}; the root is appended automatically.
    let mut clusterer = ExplicitClusterer::new(vec![
        Clustering::from_groups(vec![vec![0, 1], vec![2, 3, 4], vec![5]], 6)?,
        Clustering::from_groups(vec![vec![0], vec![1, 2]], 3)?,
    ]);
    let chain = build_chain(g, &mut clusterer, 3)?;
    for (j, graph) in chain.graphs().iter().enumerate() {
        println!("G_{}: {:?}", chain.depth() - j, graph.labels());
    }

    let embedding = chain_to_intervals(&chain)?;
    for v in 0..6 {
        println!(
            "  {} -> {}",
            chain.finest().labels()[v],
            embedding.interval_of(chain.depth(), v)
        );
    }

    let vertex_blocks = interval_vertex_blocks(&chain, &embedding);
    let partition = Arc::new(embedding.into_partition());
    let sys = build_system(partition.clone(), chain.depth())?;
    let on_graph = restrict_system(&sys, &vertex_blocks);
    println!(
        "{} functions; {} have support meeting a vertex",
        sys.len(),
        on_graph.len()
    );

    let signal = [
        ("a", 2.0),
        ("b", 2.0),
        ("c", -1.0),
        ("d", -1.0),
        ("e", -1.0),
        ("f", 5.0),
    ];
    let f = signal_to_function(signal, &vertex_blocks, &partition)?;
    let c = on_graph.analyze(&f)?;
    println!("phi0 coefficient {:+.6}", c.phi0);
    for (key, v) in c.iter() {
        println!("  {key}: {v:+.6}");
    }
    println!(
        "energy {:.12} vs ||f||^2 {:.12}",
        c.energy(),
        f.norm_squared()
    );
    Ok(())
}
