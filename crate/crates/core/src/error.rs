use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("graph contains a cycle; levels are undefined")]
    CyclicInput,
    #[error("vertex sets overlap: {0}")]
    OverlappingSets(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arc `{0}`")]
    UnknownArc(String),
    #[error("partition does not match the graph: {0}")]
    PartitionMismatch(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("product factor has no vertices")]
    EmptyFactor,
    #[error("arc `{arc}` has both ends in the contracted set `{set}`")]
    InternalArc { arc: String, set: String },
    #[error("invalid contraction set: {0}")]
    InvalidNamedSet(String),
    #[error("graph has {0} vertices; the brute-force oracle accepts at most 8")]
    TooLarge(usize),
    #[error("grid shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("priority subset of size {priority} cannot be split evenly over {rows} rows")]
    PriorityNotDivisible { priority: usize, rows: usize },
    #[error("factorization does not fit the layering: {0}")]
    FactorizationMismatch(String),
    #[error("decomposition preconditions violated: {}", .0.join(", "))]
    PreconditionViolation(Vec<String>),
    #[error("figure {0} does not exist (expected 1..=4)")]
    FigureOutOfRange(u32),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation: {0}")]
    Schema(String),
}
