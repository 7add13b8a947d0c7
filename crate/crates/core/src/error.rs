use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("duplicate node label {0:?}")]
    DuplicateLabel(String),
    #[error("duplicate edge ({i}, {j})")]
    DuplicateEdge { i: usize, j: usize },
    #[error("self-loop on node {i}")]
    SelfLoop { i: usize },
    #[error("edge ({i}, {j}) has non-positive or non-finite weight {weight}")]
    NonpositiveWeight { i: usize, j: usize, weight: f64 },
    #[error("edge ({i}, {j}) references a node outside [0, {n})")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("node subset is empty")]
    EmptySubset,
    #[error("partition does not match graph: {0}")]
    PartitionMismatch(String),
    #[error("invalid probability: {0}")]
    InvalidProbability(String),
    #[error("invalid block shape: {blocks} blocks of {nodes_per_block} nodes")]
    InvalidBlockShape { blocks: usize, nodes_per_block: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {diff}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },
    #[error("eigensolver failed to converge: {0}")]
    ConvergenceFailure(String),
    #[error("zero vector")]
    ZeroVector,
    #[error("need at least {needed} nodes, got {n}")]
    TooFewNodes { n: usize, needed: usize },
    #[error("graph is disconnected (algebraic connectivity {0:e})")]
    DisconnectedGraph(f64),
    #[error("embedding dimension {dim} out of range [1, {max}]")]
    DimensionOutOfRange { dim: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector has no entries of both signs")]
    ConstantVector,
    #[error("cluster count {k} out of range [{min}, {max}]")]
    KOutOfRange { k: usize, min: usize, max: usize },
    #[error("only {clusters} clusters reachable, {k} requested")]
    NotEnoughSplittableClusters { clusters: usize, k: usize },
    #[error("only {distinct} distinct points for {k} clusters")]
    TooFewDistinctPoints { distinct: usize, k: usize },
    #[error("fractional exponent must lie in (0, 1), got {0}")]
    InvalidFractionalExponent(f64),

    #[error("p-Laplacian exponent must lie in (1, 2], got {0}")]
    ExponentOutOfRange(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("level specs violate monotonicity: {0}")]
    SpecMonotonicityViolation(String),
    #[error("level {level} out of range (hierarchy has {levels} levels)")]
    LevelOutOfRange { level: usize, levels: usize },

    #[error("spectrum has zero variance")]
    DegenerateVariance,
}

impl Error {
    /// Stable machine-readable code, used in error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyGraph => "EmptyGraph",
            Error::DuplicateLabel(_) => "DuplicateLabel",
            Error::DuplicateEdge { .. } => "DuplicateEdge",
            Error::SelfLoop { .. } => "SelfLoop",
            Error::NonpositiveWeight { .. } => "NonpositiveWeight",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::EmptySubset => "EmptySubset",
            Error::PartitionMismatch(_) => "PartitionMismatch",
            Error::InvalidProbability(_) => "InvalidProbability",
            Error::InvalidBlockShape { .. } => "InvalidBlockShape",
            Error::InvalidPartition(_) => "InvalidPartition",
            Error::NotSymmetric { .. } => "NotSymmetric",
            Error::ConvergenceFailure(_) => "ConvergenceFailure",
            Error::ZeroVector => "ZeroVector",
            Error::TooFewNodes { .. } => "TooFewNodes",
            Error::DisconnectedGraph(_) => "DisconnectedGraph",
            Error::DimensionOutOfRange { .. } => "DimensionOutOfRange",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ConstantVector => "ConstantVector",
            Error::KOutOfRange { .. } => "KOutOfRange",
            Error::NotEnoughSplittableClusters { .. } => "NotEnoughSplittableClusters",
            Error::TooFewDistinctPoints { .. } => "TooFewDistinctPoints",
            Error::InvalidFractionalExponent(_) => "InvalidFractionalExponent",
            Error::ExponentOutOfRange(_) => "ExponentOutOfRange",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::SpecMonotonicityViolation(_) => "SpecMonotonicityViolation",
            Error::LevelOutOfRange { .. } => "LevelOutOfRange",
            Error::DegenerateVariance => "DegenerateVariance",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
