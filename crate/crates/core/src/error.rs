use std::io;

use thiserror::Error;

use crate::model::VertexId;

/// Failure of a single query. Never aborts the engine; the query is
/// force-terminated and reported with this error as its answer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("message addressed to missing vertex {0}")]
    MissingTarget(VertexId),
    #[error("malformed query: {0}")]
    Malformed(String),
    #[error("{0}")]
    App(String),
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("transport failure: {0}")]
    Transport(String),
}
