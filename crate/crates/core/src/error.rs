use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{what} exceeds cap ({size} > {cap})")]
    CapExceeded { what: &'static str, size: u64, cap: u64 },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

/// Input-format errors. Each variant has a stable [`code`](ParseError::code).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<usize>),
    #[error("edge {edge:?} does not have {expected} distinct vertices")]
    Arity { edge: Vec<usize>, expected: usize },
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u64),
    #[error("bad header: {0}")]
    BadHeader(String),
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Malformed(_) => "malformed",
            ParseError::DuplicateEdge(_) => "duplicate-edge",
            ParseError::Arity { .. } => "arity",
            ParseError::VertexOutOfRange { .. } => "vertex-out-of-range",
            ParseError::UnsupportedVersion(_) => "unsupported-version",
            ParseError::BadHeader(_) => "bad-header",
        }
    }
}
