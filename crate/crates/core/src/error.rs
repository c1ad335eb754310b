use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty graph")]
    EmptyGraph,
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("{0} {1} is not an edge")]
    NotAnEdge(VertexId, VertexId),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid cycles: {0}")]
    InvalidCycles(String),
    #[error("invalid collection: {0}")]
    InvalidCollection(String),
    #[error("invalid move: {0}")]
    InvalidMove(String),
}
