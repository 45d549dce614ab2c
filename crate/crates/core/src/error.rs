//! Crate error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("number of arms must be at least 2, got {0}")]
    TooFewArms(usize),

    #[error("observed loss must be nonnegative, got {0}")]
    NegativeLoss(f64),

    #[error("sampled arm {arm} has zero probability; loss estimate undefined")]
    ZeroProbability { arm: usize },

    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),

    #[error("embedding dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),

    #[error("a multiplex network needs at least 2 layers, got {0}")]
    TooFewLayers(usize),

    #[error("self-loop edge at node {0}")]
    SelfLoop(u32),

    #[error("node {node} out of range for a network with {num_nodes} nodes")]
    NodeOutOfRange { node: u32, num_nodes: usize },

    #[error("{path}:{line}: malformed edge list line: {msg}")]
    MalformedLine {
        path: String,
        line: u64,
        msg: String,
    },

    #[error("similarity must lie in [0, 1], got {0}")]
    InvalidSimilarity(f64),

    #[error("base layer is empty")]
    EmptyBaseLayer,

    #[error("not enough non-edges: need {needed}, only {available} available")]
    NotEnoughNonEdges { needed: usize, available: usize },

    #[error("layer {layer} has {edges} edges, too few for {folds} folds")]
    LayerTooSmall {
        layer: usize,
        edges: usize,
        folds: usize,
    },

    #[error("held-out fold {fold} of layer {layer} is empty")]
    EmptyTestFold { layer: usize, fold: usize },

    #[error("invalid training config: {0}")]
    InvalidConfig(String),

    #[error("trace is empty")]
    EmptyTrace,

    #[error("inconsistent trace: {0}")]
    InconsistentTrace(String),

    #[error("round {round} carries no true loss vector; full-information evaluation needs one")]
    MissingTrueLosses { round: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
