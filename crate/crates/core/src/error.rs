use std::fmt;

use thiserror::Error;

/// What went wrong on a single record of an edge-list document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingHeader,
    BadHeader(String),
    Malformed(String),
    Loop(usize),
    DuplicateEdge(usize, usize),
    VertexOutOfRange { vertex: usize, n: usize },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::MissingHeader => write!(f, "missing `n=<int>` header"),
            ParseErrorKind::BadHeader(s) => write!(f, "bad header `{s}`"),
            ParseErrorKind::Malformed(s) => write!(f, "malformed edge record `{s}`"),
            ParseErrorKind::Loop(v) => write!(f, "loop edge at vertex {v}"),
            ParseErrorKind::DuplicateEdge(u, v) => write!(f, "duplicate edge {u} {v}"),
            ParseErrorKind::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range for n={n}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("pattern fails the density condition: {witness}")]
    ConditionAFailed { witness: String },

    #[error("m(H) is infinite: {reason}")]
    InfiniteDensity { reason: String },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, kind: ParseErrorKind) -> Self {
        Error::Parse { line, kind }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
