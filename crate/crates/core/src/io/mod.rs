//! Reading and writing graph documents, plus DOT and trace exports.
//!
//! A document is one JSON object with a `schema` section and a `graph`
//! section; see `GraphDocument` for the field layout.

mod document;
mod export;

use std::path::Path;

use thiserror::Error;

use crate::graph::{Graph, GraphError, ValidationError};

pub use document::{graph_from_str, graph_to_string, GraphDocument};
pub use export::{export_dot, trace_to_string};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Schema(#[from] GraphError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

impl IoError {
    pub fn kind(&self) -> &'static str {
        match self {
            IoError::Io { .. } => "IoError",
            IoError::Parse { .. } => "ParseError",
            IoError::Schema(g) => g.kind(),
            IoError::Validation(_) => "ValidationError",
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        IoError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
    graph_from_str(&text)
}

pub fn save_graph(graph: &Graph, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_text(path.as_ref(), &graph_to_string(graph))
}

pub fn save_dot(graph: &Graph, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_text(path.as_ref(), &export_dot(graph))
}

pub fn export_trace(
    ctx: &crate::transform::ExecutionContext,
    path: impl AsRef<Path>,
) -> Result<(), IoError> {
    write_text(path.as_ref(), &trace_to_string(ctx))
}

fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|e| IoError::io(path, e))
}
