//! Serialized forms of graphs and chains.
//!
//! A graph is `{labels, directed, edges: [[u, v, w], ...]}` where `u`, `v`
//! are vertex indices or labels. A dense `weights` matrix may replace `edges`.
//! Undirected edge lists name each edge once. Chains are
//! `{graphs: [...finest first], parents: [[...], ...]}`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{Chain, Digraph, Graph};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Endpoint {
    Index(usize),
    Label(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub labels: Vec<String>,
    #[serde(default)]
    pub directed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(Endpoint, Endpoint, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Vec<f64>>>,
}

impl GraphJson {
    fn resolve(&self, e: &Endpoint) -> Result<usize> {
        match e {
            Endpoint::Index(i) if *i < self.labels.len() => Ok(*i),
            Endpoint::Index(i) => Err(Error::Parse(format!("vertex index {i} out of range"))),
            Endpoint::Label(l) => self
                .labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::Parse(format!("edge names unknown vertex {l:?}"))),
        }
    }

    /// The weight matrix described by this document.
    pub fn matrix(&self) -> Result<DMatrix<f64>> {
        let n = self.labels.len();
        match (&self.edges, &self.weights) {
            (Some(_), Some(_)) => Err(Error::Parse(
                "give either edges or weights, not both".into(),
            )),
            (None, Some(rows)) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Parse(format!("weights must be {n}x{n}")));
                }
                Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
            }
            (edges, None) => {
                let mut w = DMatrix::zeros(n, n);
                for (u, v, x) in edges.iter().flatten() {
                    let (u, v) = (self.resolve(u)?, self.resolve(v)?);
                    w[(u, v)] += x;
                    if !self.directed && u != v {
                        w[(v, u)] += x;
                    }
                }
                Ok(w)
            }
        }
    }

    pub fn into_digraph(self) -> Result<Digraph> {
        let w = self.matrix()?;
        Digraph::new(self.labels, w)
    }

    pub fn into_graph(self) -> Result<Graph> {
        if self.directed {
            return Err(Error::InvalidGraph("expected an undirected graph".into()));
        }
        let w = self.matrix()?;
        Graph::new(self.labels, w)
    }

    fn edge_list(weights: &DMatrix<f64>, upper_only: bool) -> Vec<(Endpoint, Endpoint, f64)> {
        let n = weights.nrows();
        let mut edges = Vec::new();
        for u in 0..n {
            let start = if upper_only { u } else { 0 };
            for v in start..n {
                let w = weights[(u, v)];
                if w != 0.0 {
                    edges.push((Endpoint::Index(u), Endpoint::Index(v), w));
                }
            }
        }
        edges
    }
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        Self {
            labels: g.labels().to_vec(),
            directed: false,
            edges: Some(Self::edge_list(g.weights(), true)),
            weights: None,
        }
    }
}

impl From<&Digraph> for GraphJson {
    fn from(g: &Digraph) -> Self {
        Self {
            labels: g.labels().to_vec(),
            directed: true,
            edges: Some(Self::edge_list(g.weights(), false)),
            weights: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainJson {
    pub graphs: Vec<GraphJson>,
    #[serde(default)]
    pub parents: Vec<Vec<usize>>,
}

impl From<&Chain> for ChainJson {
    fn from(c: &Chain) -> Self {
        Self {
            graphs: c.graphs().iter().map(GraphJson::from).collect(),
            parents: c.parents().to_vec(),
        }
    }
}

impl ChainJson {
    pub fn into_chain(self) -> Result<Chain> {
        let graphs = self
            .graphs
            .into_iter()
            .map(GraphJson::into_graph)
            .collect::<Result<Vec<_>>>()?;
        Chain::new(graphs, self.parents)
    }
}
