//! From coarse-grained chains to interval partitions, vertex blocks and
//! framelet systems restricted to a graph.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framelets::{frame_bounds, FrameBounds, FrameletSystem, PwcFunction, DEGENERACY_RATIO};
use crate::graphs::{Chain, Digraph};
use crate::hierarchy::{
    tensor_partitions, BlockId, HierarchicalPartition, Interval, PartitionBuilder, Rational,
};

/// A 1-D partition of `[0,1]` whose level `j` intervals are the nodes of `G_j`.
#[derive(Clone, Debug)]
pub struct IntervalEmbedding {
    partition: HierarchicalPartition,
    node_blocks: Vec<Vec<BlockId>>,
}

impl IntervalEmbedding {
    pub fn partition(&self) -> &HierarchicalPartition {
        &self.partition
    }

    pub fn into_partition(self) -> HierarchicalPartition {
        self.partition
    }

    /// Block of node `node` of `G_j`.
    pub fn block_of(&self, j: usize, node: usize) -> BlockId {
        self.node_blocks[j][node]
    }

    pub fn interval_of(&self, j: usize, node: usize) -> &Interval {
        &self.partition.block(self.block_of(j, node)).sides()[0]
    }
}

fn exact(w: f64) -> Rational {
    Rational::from_float(w).expect("weights are finite")
}

/// Splits `[0,1]` level by level: each node's interval is cut into pieces
/// proportional to the degrees (in `G_{j+1}`) of the nodes it contains.
///
/// Siblings are laid out left to right by smallest original vertex id.
pub fn chain_to_intervals(chain: &Chain) -> Result<IntervalEmbedding> {
    let depth = chain.depth();
    let mut builder = PartitionBuilder::new(vec![Interval::unit()]);
    let mut node_blocks = vec![vec![BlockId(0)]];
    // (node of G_j, interval) in left-to-right order
    let mut current: Vec<(usize, Interval)> = vec![(0, Interval::unit())];
    for j in 0..depth {
        builder.start_level();
        let graph = chain.level(j + 1);
        let degrees: Vec<Rational> = graph.degrees().into_iter().map(exact).collect();
        let first_member: Vec<usize> = chain.members(j + 1).iter().map(|m| m[0]).collect();
        let children = chain.children(j);
        let mut blocks = vec![BlockId(0); graph.len()];
        let mut next = Vec::with_capacity(graph.len());
        for (node, parent_iv) in &current {
            let mut kids = children[*node].clone();
            kids.sort_by_key(|&c| first_member[c]);
            let parent_id = node_blocks[j][*node];
            let total: Rational = kids.iter().map(|&c| degrees[c].clone()).sum();
            if kids.len() > 1 && total.is_zero() {
                return Err(Error::ZeroDegreeCluster {
                    level: j,
                    node: *node,
                });
            }
            let width = parent_iv.length();
            let mut lo = parent_iv.lo().clone();
            for (i, &c) in kids.iter().enumerate() {
                let hi = if i + 1 == kids.len() {
                    parent_iv.hi().clone()
                } else {
                    &lo + &width * &degrees[c] / &total
                };
                if hi == lo {
                    return Err(Error::ZeroDegreeCluster {
                        level: j + 1,
                        node: c,
                    });
                }
                let iv = Interval::new(lo.clone(), hi.clone())?;
                blocks[c] = builder.add(parent_id, vec![iv.clone()]);
                next.push((c, iv));
                lo = hi;
            }
        }
        node_blocks.push(blocks);
        current = next;
    }
    Ok(IntervalEmbedding {
        partition: builder.build()?,
        node_blocks,
    })
}

/// `v ↦ B_v`, a leaf block of the tensor partition for every vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexBlockMap {
    labels: Vec<String>,
    blocks: Vec<BlockId>,
}

impl VertexBlockMap {
    pub fn new(labels: Vec<String>, blocks: Vec<BlockId>) -> Result<Self> {
        if labels.len() != blocks.len() {
            return Err(Error::IndexMismatch(format!(
                "{} labels for {} blocks",
                labels.len(),
                blocks.len()
            )));
        }
        Ok(Self { labels, blocks })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn blocks(&self) -> &[BlockId] {
        &self.blocks
    }

    pub fn block_of(&self, label: &str) -> Option<BlockId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.blocks[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, BlockId)> + '_ {
        self.labels
            .iter()
            .map(String::as_str)
            .zip(self.blocks.iter().copied())
    }

    /// Checks that every block is a leaf of `partition`.
    pub fn check_against(&self, partition: &HierarchicalPartition) -> Result<()> {
        for (label, b) in self.iter() {
            if partition.get(b).is_none() || !partition.is_leaf(b) {
                return Err(Error::IndexMismatch(format!(
                    "vertex {label:?} maps to {b}, which is not a leaf"
                )));
            }
        }
        Ok(())
    }

    /// `χ_{B_v} / sqrt|B_v|` for every vertex, an orthonormal basis of `L2(G)`.
    pub fn space_basis(&self, partition: &Arc<HierarchicalPartition>) -> Vec<PwcFunction> {
        self.blocks
            .iter()
            .map(|&b| PwcFunction::normalized_indicator(partition.clone(), b))
            .collect()
    }

    pub fn to_json(&self) -> BTreeMap<String, usize> {
        self.iter().map(|(l, b)| (l.to_string(), b.0)).collect()
    }

    /// Vertices come back ordered by label.
    pub fn from_json(map: BTreeMap<String, usize>) -> Self {
        let (labels, blocks) = map.into_iter().map(|(l, b)| (l, BlockId(b))).unzip();
        Self { labels, blocks }
    }
}

/// Everything produced by embedding a digraph through two chains.
#[derive(Clone, Debug)]
pub struct DigraphEmbedding {
    pub partition: Arc<HierarchicalPartition>,
    pub x: IntervalEmbedding,
    pub y: IntervalEmbedding,
    pub vertex_blocks: VertexBlockMap,
}

/// Tensor partition `B_j = I^x_j ⊗ I^y_j` and `B_v = I^x_v × I^y_v`.
///
/// Both chains must have depth `J` and the digraph's vertices as their
/// finest graph.
pub fn digraph_embedding(
    g: &Digraph,
    chain_x: &Chain,
    chain_y: &Chain,
) -> Result<DigraphEmbedding> {
    if chain_x.finest().labels() != g.labels() {
        return Err(Error::InvalidChain(
            "finest chain graph does not carry the digraph's vertices".into(),
        ));
    }
    embed_chains(chain_x, chain_y)
}

/// [`digraph_embedding`] with the vertices taken from the chains themselves.
pub fn embed_chains(chain_x: &Chain, chain_y: &Chain) -> Result<DigraphEmbedding> {
    if chain_x.depth() != chain_y.depth() {
        return Err(Error::DepthMismatch {
            left: chain_x.depth(),
            right: chain_y.depth(),
        });
    }
    if chain_x.finest().labels() != chain_y.finest().labels() {
        return Err(Error::InvalidChain(
            "the two chains start from different vertex sets".into(),
        ));
    }
    let x = chain_to_intervals(chain_x)?;
    let y = chain_to_intervals(chain_y)?;
    let partition = Arc::new(tensor_partitions(x.partition(), y.partition())?);
    let depth = chain_x.depth();
    let position = |e: &IntervalEmbedding, b: BlockId| {
        e.partition()
            .level(depth)
            .iter()
            .position(|&id| id == b)
            .expect("block lies on the finest level")
    };
    let nx = x.partition().level(depth).len();
    let blocks = (0..chain_x.finest().len())
        .map(|v| {
            let ix = position(&x, x.block_of(depth, v));
            let iy = position(&y, y.block_of(depth, v));
            partition.level(depth)[ix + nx * iy]
        })
        .collect();
    let vertex_blocks = VertexBlockMap::new(chain_x.finest().labels().to_vec(), blocks)?;
    Ok(DigraphEmbedding {
        partition,
        x,
        y,
        vertex_blocks,
    })
}

/// The one-dimensional analogue: `B_v` is the level-`J` interval of `v`.
pub fn interval_vertex_blocks(chain: &Chain, embedding: &IntervalEmbedding) -> VertexBlockMap {
    let depth = chain.depth();
    let blocks = (0..chain.finest().len())
        .map(|v| embedding.block_of(depth, v))
        .collect();
    VertexBlockMap::new(chain.finest().labels().to_vec(), blocks).expect("one block per vertex")
}

/// `f = Σ_v f(v) χ_{B_v}`.
pub fn signal_to_function<'a>(
    signal: impl IntoIterator<Item = (&'a str, f64)>,
    vbm: &VertexBlockMap,
    partition: &Arc<HierarchicalPartition>,
) -> Result<PwcFunction> {
    let mut values = BTreeMap::new();
    for (label, value) in signal {
        let block = vbm
            .block_of(label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))?;
        values.insert(block, value);
    }
    if let Some(missing) = vbm.labels().iter().find(|l| {
        let b = vbm.block_of(l).expect("own label");
        !values.contains_key(&b)
    }) {
        return Err(Error::IndexMismatch(format!(
            "signal has no value for vertex {missing:?}"
        )));
    }
    let mut f = PwcFunction::zero(partition.clone());
    for (block, value) in values {
        f.add_scaled(value, &PwcFunction::indicator(partition.clone(), block))?;
    }
    Ok(f)
}

/// Values listed in vertex order.
pub fn signal_values_to_function(
    values: &[f64],
    vbm: &VertexBlockMap,
    partition: &Arc<HierarchicalPartition>,
) -> Result<PwcFunction> {
    if values.len() != vbm.len() {
        return Err(Error::IndexMismatch(format!(
            "{} values for {} vertices",
            values.len(),
            vbm.len()
        )));
    }
    signal_to_function(
        vbm.labels()
            .iter()
            .map(String::as_str)
            .zip(values.iter().copied()),
        vbm,
        partition,
    )
}

/// Children of `parent` that meet some vertex block in positive measure.
pub fn effective_children(
    partition: &HierarchicalPartition,
    parent: BlockId,
    vbm: &VertexBlockMap,
) -> Vec<bool> {
    partition
        .children(parent)
        .iter()
        .map(|&c| meets_graph(partition, c, vbm))
        .collect()
}

fn meets_graph(partition: &HierarchicalPartition, block: BlockId, vbm: &VertexBlockMap) -> bool {
    let b = partition.block(block);
    vbm.blocks().iter().any(|&v| b.meets(partition.block(v)))
}

/// `φ0` plus the atoms whose support meets some `B_v` in positive measure.
pub fn restrict_system(system: &FrameletSystem, vbm: &VertexBlockMap) -> FrameletSystem {
    let p = system.partition().clone();
    system.retain(|atom| {
        let (c1, c2) = atom.support_blocks(&p);
        meets_graph(&p, c1, vbm) || meets_graph(&p, c2, vbm)
    })
}

/// Which generator levels [`prune_redundant`] thins out.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PruneScope {
    /// Only parents on level `J − 1`, whose children are the vertex blocks' level.
    #[default]
    FinestLevel,
    AllLevels,
}

/// A pruned system together with its numerical frame bounds on `L2(G)`.
#[derive(Clone, Debug)]
pub struct PruneReport {
    pub system: FrameletSystem,
    pub bounds: FrameBounds,
    /// Numerical rank of the analysis operator on `span{χ_{B_v}}`.
    pub rank: usize,
}

/// Drops atoms that only separate non-effective children.
///
/// For a parent whose effective children `E` are a proper subset of its
/// children, the atoms kept are those with both indices in `E ∪ {r}`, `r`
/// being the lowest-indexed non-effective child.
pub fn prune_redundant(
    restricted: &FrameletSystem,
    vbm: &VertexBlockMap,
    scope: PruneScope,
) -> Result<PruneReport> {
    let p = restricted.partition().clone();
    let depth = restricted.depth();
    let mut keep_sets: BTreeMap<BlockId, BTreeSet<usize>> = BTreeMap::new();
    for atom in restricted.atoms() {
        let parent = atom.parent();
        let in_scope = match scope {
            PruneScope::FinestLevel => atom.level() + 1 == depth,
            PruneScope::AllLevels => true,
        };
        if !in_scope || keep_sets.contains_key(&parent) {
            continue;
        }
        let effective = effective_children(&p, parent, vbm);
        let mut keep: BTreeSet<usize> = BTreeSet::new();
        for (i, &e) in effective.iter().enumerate() {
            if e {
                keep.insert(i + 1);
            }
        }
        if let Some(r) = effective.iter().position(|&e| !e) {
            keep.insert(r + 1);
        }
        keep_sets.insert(parent, keep);
    }
    let system = restricted.retain(|atom| match keep_sets.get(&atom.parent()) {
        None => true,
        Some(keep) => keep.contains(&atom.key().l1) && keep.contains(&atom.key().l2),
    });
    let (bounds, rank) = graph_frame_bounds(&system, vbm)?;
    Ok(PruneReport {
        system,
        bounds,
        rank,
    })
}

/// Frame bounds of a system on `L2(G) = span{χ_{B_v}}` and the numerical
/// rank of its analysis operator there.
pub fn graph_frame_bounds(
    system: &FrameletSystem,
    vbm: &VertexBlockMap,
) -> Result<(FrameBounds, usize)> {
    let p = system.partition();
    let basis = vbm.space_basis(p);
    let space: Vec<&PwcFunction> = basis.iter().collect();
    let functions: Vec<&PwcFunction> = system.functions().collect();
    let bounds = frame_bounds(&functions, &space)?;
    let rank = analysis_rank(&functions, &space)?;
    Ok((bounds, rank))
}

fn analysis_rank(functions: &[&PwcFunction], space: &[&PwcFunction]) -> Result<usize> {
    let mut m = nalgebra::DMatrix::zeros(functions.len(), space.len());
    for (i, f) in functions.iter().enumerate() {
        for (k, s) in space.iter().enumerate() {
            m[(i, k)] = f.inner(s)?;
        }
    }
    let sv = m.singular_values();
    let max = sv.max();
    Ok(sv
        .iter()
        .filter(|&&s| s > 0.0 && s * s > DEGENERACY_RATIO * max * max)
        .count())
}

/// Function counts `{φ0} ∪ atoms` split by level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemCounts {
    pub total: usize,
    pub per_level: Vec<usize>,
}

impl SystemCounts {
    pub fn of(system: &FrameletSystem) -> Self {
        Self {
            total: system.len(),
            per_level: system.counts_by_level(),
        }
    }
}

/// Exact measure `|B_v|` summed over all vertices, as `f64`.
pub fn graph_measure(vbm: &VertexBlockMap, partition: &HierarchicalPartition) -> f64 {
    let total: Rational = vbm
        .blocks()
        .iter()
        .map(|&b| partition.block(b).measure().clone())
        .sum();
    total.to_f64().unwrap_or(f64::NAN)
}
