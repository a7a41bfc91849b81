use super::cluster::{coarse_grain, Clusterer, Clustering};
use super::Graph;
use crate::error::{Error, Result};

/// A coarse-grained chain `G_J, …, G_0`, stored finest first.
///
/// `parents[i][v]` is the node of `graphs[i + 1]` that contains node `v` of
/// `graphs[i]`. The last graph always has a single node.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    graphs: Vec<Graph>,
    parents: Vec<Vec<usize>>,
}

fn weights_agree(expected: &Graph, actual: &Graph, exact: bool) -> Option<(usize, usize)> {
    let n = expected.len();
    for u in 0..n {
        for v in 0..n {
            let (a, b) = (expected.weight(u, v), actual.weight(u, v));
            let ok = if exact {
                a == b
            } else {
                (a - b).abs() <= 1e-12 * a.abs().max(1.0)
            };
            if !ok {
                return Some((u, v));
            }
        }
    }
    None
}

impl Chain {
    /// Validates the parent maps and the coarse-grained weights of every level.
    ///
    /// A one-node root is appended when the coarsest graph has several nodes.
    pub fn new(mut graphs: Vec<Graph>, mut parents: Vec<Vec<usize>>) -> Result<Self> {
        if graphs.is_empty() {
            return Err(Error::InvalidChain(
                "a chain needs at least one graph".into(),
            ));
        }
        if parents.len() + 1 != graphs.len() {
            return Err(Error::InvalidChain(format!(
                "{} graphs need {} parent maps, got {}",
                graphs.len(),
                graphs.len() - 1,
                parents.len()
            )));
        }
        for (i, map) in parents.iter().enumerate() {
            let (fine, coarse) = (&graphs[i], &graphs[i + 1]);
            if map.len() != fine.len() {
                return Err(Error::InvalidChain(format!(
                    "parent map {i} has {} entries for {} nodes",
                    map.len(),
                    fine.len()
                )));
            }
            if let Some(&p) = map.iter().find(|&&p| p >= coarse.len()) {
                return Err(Error::InvalidChain(format!(
                    "parent map {i} points at node {p} of a {}-node graph",
                    coarse.len()
                )));
            }
            let clustering = Clustering::from_assignment(map.clone())
                .map_err(|e| Error::InvalidChain(format!("parent map {i} is not onto: {e}")))?;
            if clustering.len() != coarse.len() {
                return Err(Error::InvalidChain(format!(
                    "parent map {i} is not onto the {}-node graph",
                    coarse.len()
                )));
            }
            let expected = coarse_grain(fine, &clustering)?;
            let exact = fine.has_integer_weights() && coarse.has_integer_weights();
            if let Some((u, v)) = weights_agree(&expected, coarse, exact) {
                return Err(Error::InvalidChain(format!(
                    "level {i}->{}: W({u},{v}) is {} but coarse-graining gives {}",
                    i + 1,
                    coarse.weight(u, v),
                    expected.weight(u, v)
                )));
            }
        }
        let last = graphs.last().expect("non-empty");
        if last.len() > 1 {
            let whole = Clustering::whole(last.len());
            let root = coarse_grain(last, &whole)?;
            parents.push(whole.assignment().to_vec());
            graphs.push(root);
        }
        Ok(Self { graphs, parents })
    }

    /// The chain of a single graph: itself plus a one-node root when needed.
    pub fn trivial(g: Graph) -> Self {
        Self::new(vec![g], Vec::new()).expect("trivial chain is valid")
    }

    /// `J`, the number of coarse-graining steps.
    pub fn depth(&self) -> usize {
        self.graphs.len() - 1
    }

    /// Graphs finest first.
    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn parents(&self) -> &[Vec<usize>] {
        &self.parents
    }

    /// `G_j` for `j ∈ 0..=J`, with `G_0` the root.
    pub fn level(&self, j: usize) -> &Graph {
        &self.graphs[self.depth() - j]
    }

    /// `G_J`, the graph whose vertices are the original ones.
    pub fn finest(&self) -> &Graph {
        &self.graphs[0]
    }

    /// For level `j`, the nodes of `G_{j+1}` inside each node of `G_j`, in
    /// ascending node order.
    pub fn children(&self, j: usize) -> Vec<Vec<usize>> {
        let fine = self.depth() - j - 1;
        let mut out = vec![Vec::new(); self.graphs[fine + 1].len()];
        for (v, &p) in self.parents[fine].iter().enumerate() {
            out[p].push(v);
        }
        out
    }

    /// Original vertices (nodes of `G_J`) inside each node of `G_j`.
    pub fn members(&self, j: usize) -> Vec<Vec<usize>> {
        let steps = self.depth() - j;
        let mut out = vec![Vec::new(); self.level(j).len()];
        for v in 0..self.finest().len() {
            let mut node = v;
            for map in &self.parents[..steps] {
                node = map[node];
            }
            out[node].push(v);
        }
        out
    }
}

/// Repeatedly coarse-grains `g` until one node remains.
///
/// The chain depth is at most `max_depth` (but at least one when `g` has
/// several vertices); if clustering has not reached a single node by then,
/// a one-node root is appended.
pub fn build_chain(g: Graph, clusterer: &mut dyn Clusterer, max_depth: usize) -> Result<Chain> {
    let mut graphs = vec![g];
    let mut parents = Vec::new();
    let mut step = 0;
    while graphs.last().expect("non-empty").len() > 1 && step + 1 < max_depth {
        let current = graphs.last().expect("non-empty");
        let clustering = clusterer.cluster(current, step)?;
        if clustering.len() >= current.len() {
            return Err(Error::ClustererStalled {
                level: step,
                nodes: current.len(),
            });
        }
        let coarse = coarse_grain(current, &clustering)?;
        parents.push(clustering.assignment().to_vec());
        graphs.push(coarse);
        step += 1;
    }
    Chain::new(graphs, parents)
}

/// Prepends copies of the finest graph (identity parent maps) until the
/// chain has depth `target_depth`.
pub fn pad_chain(chain: &Chain, target_depth: usize) -> Result<Chain> {
    if target_depth < chain.depth() {
        return Err(Error::DepthMismatch {
            left: target_depth,
            right: chain.depth(),
        });
    }
    let extra = target_depth - chain.depth();
    let finest = chain.finest().clone();
    let n = finest.len();
    let mut graphs = vec![finest; extra];
    graphs.extend(chain.graphs.iter().cloned());
    let mut parents = vec![(0..n).collect::<Vec<_>>(); extra];
    parents.extend(chain.parents.iter().cloned());
    Ok(Chain { graphs, parents })
}
