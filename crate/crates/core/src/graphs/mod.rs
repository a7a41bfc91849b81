//! Weighted graphs, digraph symmetrization and coarse-grained chains.

mod chain;
mod cluster;
mod json;

use std::collections::{HashMap, VecDeque};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub use chain::{build_chain, pad_chain, Chain};
pub use cluster::{
    coarse_grain, default_cluster, Clusterer, Clustering, ExplicitClusterer, GreedyClusterer,
};
pub use json::{ChainJson, Endpoint, GraphJson};

fn check_weights(labels: &[String], weights: &DMatrix<f64>) -> Result<()> {
    let n = labels.len();
    if n == 0 {
        return Err(Error::InvalidGraph("graph has no vertices".into()));
    }
    if weights.shape() != (n, n) {
        return Err(Error::InvalidGraph(format!(
            "{} labels but a {}x{} weight matrix",
            n,
            weights.nrows(),
            weights.ncols()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::InvalidGraph(format!(
            "weight {w} is negative or not finite"
        )));
    }
    let mut seen = HashMap::with_capacity(n);
    for (i, label) in labels.iter().enumerate() {
        if let Some(j) = seen.insert(label.as_str(), i) {
            return Err(Error::InvalidGraph(format!(
                "label {label:?} used by vertices {j} and {i}"
            )));
        }
    }
    Ok(())
}

/// Breadth-first reachability from vertex 0 over entries where `w(u, v)` is non-zero.
fn connected_by(n: usize, edge: impl Fn(usize, usize) -> bool) -> bool {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for (v, visited) in seen.iter_mut().enumerate() {
            if !*visited && edge(u, v) {
                *visited = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == n
}

/// A directed weighted graph `(V, W)` with non-negative weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Digraph {
    labels: Vec<String>,
    weights: DMatrix<f64>,
}

impl Digraph {
    pub fn new(labels: Vec<String>, weights: DMatrix<f64>) -> Result<Self> {
        check_weights(&labels, &weights)?;
        Ok(Self { labels, weights })
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

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.weights[(u, v)]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The same vertices with every arc reversed.
    pub fn transpose(&self) -> Digraph {
        Digraph {
            labels: self.labels.clone(),
            weights: self.weights.transpose(),
        }
    }

    /// Connectivity of the underlying undirected graph `(W + Wᵀ)/2`.
    pub fn is_weakly_connected(&self) -> bool {
        let w = &self.weights;
        connected_by(self.len(), |u, v| w[(u, v)] != 0.0 || w[(v, u)] != 0.0)
    }

    /// `Gx = (V, W1 − diag W1)` and `Gy = (V, W2 − diag W2)` where
    /// `W1 = (I + W)(I + W)ᵀ` and `W2 = (I + W)ᵀ(I + W)`.
    pub fn symmetrize(&self) -> (Graph, Graph) {
        let n = self.len();
        let we = DMatrix::identity(n, n) + &self.weights;
        let mut w1 = &we * we.transpose();
        let mut w2 = we.transpose() * &we;
        w1.fill_diagonal(0.0);
        w2.fill_diagonal(0.0);
        // Rounding can leave the two triangles a few ulps apart for real weights.
        for m in [&mut w1, &mut w2] {
            for i in 0..n {
                for j in i + 1..n {
                    m[(j, i)] = m[(i, j)];
                }
            }
        }
        let gx = Graph {
            labels: self.labels.clone(),
            weights: w1,
        };
        let gy = Graph {
            labels: self.labels.clone(),
            weights: w2,
        };
        (gx, gy)
    }
}

/// An undirected weighted graph: `W` is exactly symmetric.
///
/// The diagonal holds self-loops, which only coarse-grained graphs carry.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    labels: Vec<String>,
    weights: DMatrix<f64>,
}

impl Graph {
    pub fn new(labels: Vec<String>, weights: DMatrix<f64>) -> Result<Self> {
        check_weights(&labels, &weights)?;
        let n = labels.len();
        for i in 0..n {
            for j in i + 1..n {
                if weights[(i, j)] != weights[(j, i)] {
                    return Err(Error::InvalidGraph(format!(
                        "W({i},{j}) = {} but W({j},{i}) = {}",
                        weights[(i, j)],
                        weights[(j, i)]
                    )));
                }
            }
        }
        Ok(Self { labels, weights })
    }

    /// Unit-weight graph from an undirected edge list over `labels`.
    pub fn from_edges<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        edges: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        let mut w = DMatrix::zeros(n, n);
        for &(u, v, x) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range")));
            }
            w[(u, v)] = x;
            w[(v, u)] = x;
        }
        Self::new(labels, w)
    }

    /// One vertex, no loop.
    pub fn singleton(label: impl Into<String>) -> Self {
        Self {
            labels: vec![label.into()],
            weights: DMatrix::zeros(1, 1),
        }
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

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.weights[(u, v)]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `d(v) = Σ_u W(v, u)`; a self-loop is counted once.
    pub fn degree(&self, v: usize) -> f64 {
        self.weights.row(v).sum()
    }

    pub fn degrees(&self) -> Vec<f64> {
        (0..self.len()).map(|v| self.degree(v)).collect()
    }

    /// `Σ_{u,v} W(u, v)` over ordered pairs.
    pub fn total_weight(&self) -> f64 {
        self.weights.sum()
    }

    pub fn is_connected(&self) -> bool {
        let w = &self.weights;
        connected_by(self.len(), |u, v| w[(u, v)] != 0.0)
    }

    /// Whether every weight is an integer, which makes sums exact.
    pub fn has_integer_weights(&self) -> bool {
        self.weights
            .iter()
            .all(|w| w.fract() == 0.0 && w.abs() < 9.0e15)
    }
}
