//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input file.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Edge-list ingestion refuses graphs with no edges.
    #[error("input contains no edges")]
    EmptyEdgeList,

    /// A precondition on an operation's arguments was violated.
    #[error("{0}")]
    Domain(String),

    /// Participation statistics do not belong to the graph they were
    /// supplied with.
    #[error("stats/graph mismatch: {0}")]
    StatsMismatch(String),

    /// A time or node budget ran out before the operation could finish.
    #[error("budget exhausted: {0}")]
    Budget(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
