use thiserror::Error;

use crate::graph::GraphError;
use crate::query::{QueryError, SyntaxError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("{}:{}: {}", .0.line, .0.column, .0.message)]
    Syntax(SyntaxError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("no trace map `{0}`: its class has not been created yet")]
    UnknownTraceMap(String),
    #[error("query must yield a set, got {0}")]
    NotASet(&'static str),
    #[error("query must yield a set of triples: {0}")]
    NotTripleSet(String),
    #[error("query must yield a map, got {0}")]
    NotAMap(&'static str),
    #[error("{archetype} is not an archetype of {class}")]
    UnknownArchetype { class: String, archetype: String },
    #[error("archetype {archetype} of {class} occurs more than once")]
    DuplicateArchetype { class: String, archetype: String },
    #[error("`{0}` is already bound")]
    DuplicateBinding(String),
    #[error("`{0}` is reserved for trace maps")]
    ReservedName(String),
}

impl From<GraphError> for TransformError {
    fn from(e: GraphError) -> Self {
        TransformError::Query(QueryError::Graph(e))
    }
}

impl TransformError {
    pub fn kind(&self) -> &'static str {
        match self {
            TransformError::Syntax(_) => "SyntaxError",
            TransformError::Query(q) => q.kind(),
            TransformError::UnknownTraceMap(_) => "UnknownTraceMap",
            TransformError::NotASet(_) => "NotASet",
            TransformError::NotTripleSet(_) => "NotTripleSet",
            TransformError::NotAMap(_) => "NotAMap",
            TransformError::UnknownArchetype { .. } => "UnknownArchetype",
            TransformError::DuplicateArchetype { .. } => "DuplicateArchetype",
            TransformError::DuplicateBinding(_) => "DuplicateBinding",
            TransformError::ReservedName(_) => "ReservedName",
        }
    }
}

/// A statement failure, located by statement index and source line.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("statement {index} (line {line}): {error}")]
pub struct ExecError {
    pub index: usize,
    pub line: u32,
    pub error: TransformError,
}

impl ExecError {
    pub fn kind(&self) -> &'static str {
        self.error.kind()
    }
}
