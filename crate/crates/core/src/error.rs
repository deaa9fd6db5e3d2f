use thiserror::Error;

/// Errors raised by the graph model and the algorithms built on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GedError {
    #[error("node index {index} out of range for graph with {order} nodes")]
    NodeOutOfRange { index: usize, order: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge between nodes {0} and {1}")]
    DuplicateEdge(usize, usize),
    #[error("node map does not fit the graph pair: {0}")]
    InvalidNodeMap(String),
    #[error("permutation is not a bijection on {0} nodes")]
    NotBijection(usize),
    #[error("swap cycle references an assignment that is not in the node map: {0}")]
    ForeignAssignment(String),
    #[error("instance too large for exhaustive enumeration: {0}")]
    SizeGuard(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid edit cost: {0}")]
    InvalidCost(String),
    #[error(transparent)]
    Parse(#[from] crate::io::ParseError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl GedError {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, err: impl std::fmt::Display) -> Self {
        GedError::Io { path: path.as_ref().display().to_string(), message: err.to_string() }
    }

    /// Whether the error stems from user input (files, flags, parameters).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            GedError::Parse(_)
                | GedError::Io { .. }
                | GedError::InvalidParameter(_)
                | GedError::InvalidCost(_)
                | GedError::SizeGuard(_)
        )
    }
}

pub type Result<T, E = GedError> = std::result::Result<T, E>;
