use thiserror::Error;

use crate::guarding::TdViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty source set")]
    EmptySourceSet,

    #[error("empty target set")]
    EmptyTargets,

    #[error("vertex {vertex} out of range (graph has {n} vertices)")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("vertex {0} is unreachable from the given roots")]
    Unreachable(usize),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("faces not bounded by cycles (face {0})")]
    FacesNotCycles(usize),

    #[error("invalid tree decomposition: {0}")]
    InvalidTreeDecomposition(TdViolation),

    #[error("tree decomposition width {width} exceeds the allowed {allowed}")]
    WidthExceeded { width: usize, allowed: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant broken: {0}")]
    InvariantBroken(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
