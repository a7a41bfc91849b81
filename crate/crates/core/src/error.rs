use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("level {level} does not tile [0,1]: {detail}")]
    GapOrOverlap { level: usize, detail: String },

    #[error("level {level}: {detail}")]
    NotNested { level: usize, detail: String },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("depth mismatch: {left} vs {right}")]
    DepthMismatch { left: usize, right: usize },

    #[error("bad weights: {0}")]
    BadWeights(String),

    #[error("bad pair ({i1}, {i2}) for m = {m}: need 1 <= i1 < i2 <= m")]
    BadPair { i1: usize, i2: usize, m: usize },

    #[error("functions live on different partitions")]
    PartitionMismatch,

    #[error("coefficient index mismatch: {0}")]
    IndexMismatch(String),

    #[error("span is numerically rank-deficient (eigenvalue ratio {ratio:e})")]
    DegenerateSpan { ratio: f64 },

    #[error("bad clustering: {0}")]
    BadClustering(String),

    #[error("clusterer made no progress at chain level {level} ({nodes} nodes)")]
    ClustererStalled { level: usize, nodes: usize },

    #[error("cluster {node} at chain level {level} has zero total degree")]
    ZeroDegreeCluster { level: usize, node: usize },

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
