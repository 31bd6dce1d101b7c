use thiserror::Error;

use crate::degree::Degree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KGraphError {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("rank must be at least 1")]
    RankZero,

    #[error("modulus {0} has a zero coordinate")]
    ZeroModulus(Degree),

    #[error("degree arithmetic overflow")]
    Overflow,

    #[error("degree {lhs} is not below {rhs}")]
    NotBelow { lhs: Degree, rhs: Degree },

    #[error("depth {available} is insufficient, {needed} required")]
    DepthExceeded { needed: Degree, available: Degree },

    #[error("morphism {0} is not stored")]
    NotStored(u32),

    #[error("invalid segment: need {m} <= {n} <= {top}")]
    InvalidSegment { m: Degree, n: Degree, top: Degree },

    #[error("vertex `{0}` is a sink (emits no edges)")]
    Sink(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("duplicate name `{0}`")]
    DuplicateName(String),

    #[error("invalid skeleton: {0}")]
    InvalidSkeleton(String),

    #[error("malformed graph: {0}")]
    Malformed(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-symmetric matrix")]
    NotSymmetric,

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for KGraphError {
    fn from(e: std::io::Error) -> Self {
        KGraphError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, KGraphError>;
