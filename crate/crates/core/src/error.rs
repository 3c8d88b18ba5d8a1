use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {count} vertices")]
    InvalidVertex { vertex: usize, count: usize },

    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),

    #[error("parallel edge between {0} and {1}")]
    ParallelEdge(usize, usize),

    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),

    #[error("graph is not regular")]
    NotRegular,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("radius mismatch: {0} vs {1}")]
    RadiusMismatch(usize, usize),

    #[error("path length {len} exceeds tree radius {limit}")]
    BeyondTreeRadius { len: usize, limit: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("configuration model failed to produce a simple graph after {0} attempts")]
    AttemptsExhausted(usize),

    #[error("{what} too large: {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("set condition violated: {0}")]
    InvalidSet(String),

    #[error("region violation: {0}")]
    Region(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
