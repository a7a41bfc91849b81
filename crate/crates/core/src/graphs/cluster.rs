use nalgebra::DMatrix;

use super::Graph;
use crate::error::{Error, Result};

/// A partition of `0..n` into non-empty clusters `0..m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clustering {
    assignment: Vec<usize>,
    clusters: Vec<Vec<usize>>,
}

impl Clustering {
    /// From `assignment[v] = cluster of v`; cluster ids must be exactly `0..m`.
    pub fn from_assignment(assignment: Vec<usize>) -> Result<Self> {
        let m = assignment.iter().max().map_or(0, |&c| c + 1);
        let mut clusters = vec![Vec::new(); m];
        for (v, &c) in assignment.iter().enumerate() {
            clusters[c].push(v);
        }
        if let Some(c) = clusters.iter().position(Vec::is_empty) {
            return Err(Error::BadClustering(format!("cluster {c} is empty")));
        }
        Ok(Self {
            assignment,
            clusters,
        })
    }

    /// From explicit member lists, which must cover `0..n` exactly once.
    pub fn from_groups(groups: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut assignment = vec![usize::MAX; n];
        for (c, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::BadClustering(format!("cluster {c} is empty")));
            }
            for &v in group {
                if v >= n {
                    return Err(Error::BadClustering(format!("vertex {v} out of range")));
                }
                if assignment[v] != usize::MAX {
                    return Err(Error::BadClustering(format!("vertex {v} assigned twice")));
                }
                assignment[v] = c;
            }
        }
        if let Some(v) = assignment.iter().position(|&c| c == usize::MAX) {
            return Err(Error::BadClustering(format!("vertex {v} is unassigned")));
        }
        Self::from_assignment(assignment)
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_assignment((0..n).collect()).expect("identity clustering")
    }

    pub fn whole(n: usize) -> Self {
        Self::from_assignment(vec![0; n]).expect("single cluster")
    }

    /// Renumbers clusters by ascending smallest member.
    pub fn canonical(&self) -> Self {
        let mut order: Vec<usize> = (0..self.clusters.len()).collect();
        order.sort_by_key(|&c| self.clusters[c][0]);
        let mut rename = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            rename[old] = new;
        }
        Self::from_assignment(self.assignment.iter().map(|&c| rename[c]).collect())
            .expect("renaming keeps clusters non-empty")
    }

    pub fn vertex_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Members of each cluster in ascending order.
    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }
}

/// `W^cg([u], [v]) = Σ_{u∈[u]} Σ_{v∈[v]} W(u, v)`, self-loops included.
///
/// Node labels are the member labels joined by commas.
pub fn coarse_grain(g: &Graph, c: &Clustering) -> Result<Graph> {
    if c.vertex_count() != g.len() {
        return Err(Error::BadClustering(format!(
            "clustering covers {} vertices, graph has {}",
            c.vertex_count(),
            g.len()
        )));
    }
    let m = c.len();
    let mut w = DMatrix::zeros(m, m);
    for u in 0..g.len() {
        let cu = c.cluster_of(u);
        for v in 0..g.len() {
            w[(cu, c.cluster_of(v))] += g.weight(u, v);
        }
    }
    let labels = c
        .clusters()
        .iter()
        .map(|members| {
            members
                .iter()
                .map(|&v| g.labels()[v].as_str())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    Graph::new(labels, w)
}

/// Produces the clustering used for one coarse-graining step.
///
/// `step` counts from zero at the finest graph.
pub trait Clusterer {
    fn cluster(&mut self, g: &Graph, step: usize) -> Result<Clustering>;
}

/// Replays a fixed list of clusterings, one per step.
#[derive(Clone, Debug)]
pub struct ExplicitClusterer {
    steps: Vec<Clustering>,
}

impl ExplicitClusterer {
    pub fn new(steps: Vec<Clustering>) -> Self {
        Self { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl Clusterer for ExplicitClusterer {
    fn cluster(&mut self, g: &Graph, step: usize) -> Result<Clustering> {
        let c = self.steps.get(step).cloned().ok_or_else(|| {
            Error::BadClustering(format!("no clustering supplied for step {step}"))
        })?;
        if c.vertex_count() != g.len() {
            return Err(Error::BadClustering(format!(
                "step {step}: clustering covers {} vertices, graph has {}",
                c.vertex_count(),
                g.len()
            )));
        }
        Ok(c)
    }
}

/// [`default_cluster`] with per-step target cluster counts.
///
/// Steps beyond the supplied list halve the node count (rounding up).
#[derive(Clone, Debug, Default)]
pub struct GreedyClusterer {
    pub targets: Vec<usize>,
}

impl GreedyClusterer {
    pub fn new(targets: Vec<usize>) -> Self {
        Self { targets }
    }
}

impl Clusterer for GreedyClusterer {
    fn cluster(&mut self, g: &Graph, step: usize) -> Result<Clustering> {
        let target = self
            .targets
            .get(step)
            .copied()
            .unwrap_or_else(|| g.len().div_ceil(2));
        Ok(default_cluster(g, target))
    }
}

/// Greedy agglomeration down to `target` clusters (at least one).
///
/// Each round merges the pair `(A, B)` maximizing `W(A, B) / (d(A) d(B))`,
/// where a zero degree product scores zero. Ties go to the pair with the
/// lexicographically smallest `(min A, min B)`.
pub fn default_cluster(g: &Graph, target: usize) -> Clustering {
    let target = target.max(1);
    let n = g.len();
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut w: Vec<Vec<f64>> = (0..n)
        .map(|u| (0..n).map(|v| g.weight(u, v)).collect())
        .collect();
    let mut deg: Vec<f64> = g.degrees();
    while members.len() > target {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..members.len() {
            for b in a + 1..members.len() {
                let denom = deg[a] * deg[b];
                let score = if denom > 0.0 { w[a][b] / denom } else { 0.0 };
                // Clusters stay sorted by smallest member, so index order is the tie order.
                if best.is_none_or(|(s, _, _)| score > s) {
                    best = Some((score, a, b));
                }
            }
        }
        let (_, a, b) = best.expect("at least two clusters");
        let moved = members.remove(b);
        members[a].extend(moved);
        members[a].sort_unstable();
        let row_b = w.remove(b);
        for row in &mut w {
            let x = row.remove(b);
            row[a] += x;
        }
        for (k, x) in row_b.into_iter().enumerate() {
            let k = if k > b {
                k - 1
            } else if k == b {
                a
            } else {
                k
            };
            w[a][k] += x;
        }
        deg[a] += deg.remove(b);
    }
    Clustering::from_groups(members, n)
        .expect("merging preserves a partition")
        .canonical()
}
