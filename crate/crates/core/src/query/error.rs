use thiserror::Error;

use crate::graph::GraphError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("{0}")]
    TypeError(String),
    #[error("reportMap key {key} maps to both {existing} and {new}")]
    MapKeyConflict {
        key: String,
        existing: String,
        new: String,
    },
    #[error("theElement expects exactly one element, got {0}")]
    NotSingleton(usize),
    #[error("{function} expects a collection, got {found}")]
    NotACollection {
        function: &'static str,
        found: &'static str,
    },
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("type `{name}` is ambiguous: {candidates}")]
    AmbiguousType { name: String, candidates: String },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("tuple index {index} out of range for a tuple of {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl QueryError {
    pub fn kind(&self) -> &'static str {
        match self {
            QueryError::UnboundVariable(_) => "UnboundVariable",
            QueryError::TypeError(_) => "TypeError",
            QueryError::MapKeyConflict { .. } => "MapKeyConflict",
            QueryError::NotSingleton(_) => "NotSingleton",
            QueryError::NotACollection { .. } => "NotACollection",
            QueryError::UnknownType(_) => "UnknownType",
            QueryError::AmbiguousType { .. } => "AmbiguousType",
            QueryError::UnknownFunction(_) => "UnknownFunction",
            QueryError::IndexOutOfRange { .. } => "IndexOutOfRange",
            QueryError::Graph(g) => g.kind(),
        }
    }
}
