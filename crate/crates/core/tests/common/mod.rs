//! Shared fixtures and generators for the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use adahaar::embedding::{embed_chains, DigraphEmbedding};
use adahaar::graphs::{Chain, ChainJson, Digraph, Graph, GraphJson};
use adahaar::hierarchy::{
    ratio, refine_interval_levels, HierarchicalPartition, Interval, PartitionBuilder, Rational,
};
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn load_chain(name: &str) -> Chain {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    serde_json::from_str::<ChainJson>(&text)
        .unwrap()
        .into_chain()
        .unwrap()
}

pub fn load_digraph() -> Digraph {
    let text = std::fs::read_to_string(fixture("example2_digraph.json")).unwrap();
    serde_json::from_str::<GraphJson>(&text)
        .unwrap()
        .into_digraph()
        .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The adjacency matrix of the six-vertex undirected example, rows a..f.
pub const EXAMPLE1_W: [[f64; 6]; 6] = [
    [0., 1., 1., 0., 0., 0.],
    [1., 0., 0., 0., 0., 0.],
    [1., 0., 0., 1., 1., 1.],
    [0., 0., 1., 0., 1., 0.],
    [0., 0., 1., 1., 0., 0.],
    [0., 0., 1., 0., 0., 0.],
];

/// The second symmetrized graph of the digraph example, rows a..f.
pub const EXAMPLE2_WY: [[f64; 6]; 6] = [
    [0., 1., 1., 1., 0., 1.],
    [1., 0., 0., 0., 0., 0.],
    [1., 0., 0., 1., 1., 1.],
    [1., 0., 1., 0., 1., 1.],
    [0., 0., 1., 1., 0., 0.],
    [1., 0., 1., 1., 0., 0.],
];

pub fn labels6() -> Vec<String> {
    ["a", "b", "c", "d", "e", "f"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

pub fn example1_graph() -> Graph {
    let w = nalgebra::DMatrix::from_fn(6, 6, |i, j| EXAMPLE1_W[i][j]);
    Graph::new(labels6(), w).unwrap()
}

/// Interval levels of the undirected example, written out by hand.
pub fn example1_levels() -> Vec<Vec<Interval>> {
    let iv = |a: (i64, i64), b: (i64, i64)| Interval::from_ratios(a, b).unwrap();
    vec![
        vec![Interval::unit()],
        vec![iv((0, 1), (1, 4)), iv((1, 4), (1, 1))],
        vec![
            iv((0, 1), (1, 4)),
            iv((1, 4), (11, 12)),
            iv((11, 12), (1, 1)),
        ],
        vec![
            iv((0, 1), (1, 6)),
            iv((1, 6), (1, 4)),
            iv((1, 4), (7, 12)),
            iv((7, 12), (3, 4)),
            iv((3, 4), (11, 12)),
            iv((11, 12), (1, 1)),
        ],
    ]
}

pub fn example1_partition() -> Arc<HierarchicalPartition> {
    Arc::new(refine_interval_levels(example1_levels()).unwrap())
}

pub fn example2_embedding() -> DigraphEmbedding {
    embed_chains(
        &load_chain("example1_chain_x.json"),
        &load_chain("example2_chain_y.json"),
    )
    .unwrap()
}

/// Cuts `[lo, hi)` into `k` pieces at distinct random rational points.
fn random_cuts(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational, k: usize) -> Vec<Interval> {
    let den = 64i64;
    let mut ticks: Vec<i64> = (1..den).collect();
    ticks.shuffle(rng);
    let mut chosen: Vec<i64> = ticks[..k - 1].to_vec();
    chosen.sort_unstable();
    let width = hi - lo;
    let mut points = vec![lo.clone()];
    points.extend(chosen.iter().map(|&t| lo + &width * ratio(t, den)));
    points.push(hi.clone());
    points
        .windows(2)
        .map(|w| Interval::new(w[0].clone(), w[1].clone()).unwrap())
        .collect()
}

/// Random 1-D partition of depth `depth`; every split has between 1 and
/// `max_children` children.
pub fn random_partition_1d(
    rng: &mut ChaCha8Rng,
    depth: usize,
    max_children: usize,
) -> HierarchicalPartition {
    random_partition(rng, 1, depth, max_children)
}

/// Random partition of `[0,1]^d`; each block is cut into a random grid.
pub fn random_partition(
    rng: &mut ChaCha8Rng,
    dimension: usize,
    depth: usize,
    max_per_axis: usize,
) -> HierarchicalPartition {
    let mut builder = PartitionBuilder::new(vec![Interval::unit(); dimension]);
    let mut current: Vec<(adahaar::hierarchy::BlockId, Vec<Interval>)> = vec![(
        adahaar::hierarchy::BlockId(0),
        vec![Interval::unit(); dimension],
    )];
    for _ in 0..depth {
        builder.start_level();
        let mut next = Vec::new();
        for (id, sides) in &current {
            let per_axis: Vec<Vec<Interval>> = sides
                .iter()
                .map(|s| {
                    let k = rng.gen_range(1..=max_per_axis);
                    random_cuts(rng, s.lo(), s.hi(), k)
                })
                .collect();
            let mut grid: Vec<Vec<Interval>> = vec![Vec::new()];
            for axis in &per_axis {
                grid = axis
                    .iter()
                    .flat_map(|iv| {
                        grid.iter().map(move |prefix| {
                            let mut p = prefix.clone();
                            p.push(iv.clone());
                            p
                        })
                    })
                    .collect();
            }
            for child in grid {
                let cid = builder.add(*id, child.clone());
                next.push((cid, child));
            }
        }
        current = next;
    }
    builder.build().unwrap()
}

/// Sum of `r` over an iterator of exact rationals.
pub fn rational_sum<'a>(it: impl Iterator<Item = &'a Rational>) -> Rational {
    it.fold(Rational::from_integer(0.into()), |acc, x| acc + x)
}

pub fn one() -> Rational {
    Rational::one()
}

/// Random signal values in [-1, 1).
pub fn random_values(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// `‖f‖²` computed straight from dense leaf values and leaf measures.
pub fn dense_norm2(p: &HierarchicalPartition, values: &[f64]) -> f64 {
    p.leaves()
        .iter()
        .zip(values)
        .map(|(&l, v)| v * v * p.block(l).measure_f64())
        .sum()
}
