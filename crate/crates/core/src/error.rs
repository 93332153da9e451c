use thiserror::Error;

/// Errors raised by the graph, counting, and certification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("random-regular generation gave up after {restarts} restarts")]
    GenerationTimeout { restarts: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: usize, v: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graph is not regular (degrees range over {min}..={max})")]
    NotRegular { min: usize, max: usize },

    #[error("vertex set must be nonempty")]
    EmptySet,

    #[error("vertex sets must be disjoint")]
    SetsNotDisjoint,

    #[error("sets of sizes {x} and {y} do not exceed the threshold {threshold:.6}")]
    SetsTooSmall { x: usize, y: usize, threshold: f64 },

    #[error("{op}: n = {n} exceeds the size cap {cap}")]
    TooLarge { op: &'static str, n: usize, cap: usize },

    #[error("{op} requires an even number of vertices, got {n}")]
    OddVertexCount { op: &'static str, n: usize },

    #[error("k = {k} out of range {min}..={max}")]
    KOutOfRange { k: usize, min: usize, max: usize },

    #[error("not a Hamilton cycle of the graph: {0}")]
    NotAHamiltonCycle(String),

    #[error("not a 2-factor of the graph: {0}")]
    InvalidTwoFactor(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("inconsistent trace: {0}")]
    InconsistentTrace(String),
}

pub type Result<T> = std::result::Result<T, Error>;
