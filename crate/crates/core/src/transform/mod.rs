//! Schema-building transformations: statements that create target classes,
//! attributes and elements from query results, recording archetype/image
//! trace maps along the way.

mod ast;
mod error;
mod exec;
mod parser;

pub use ast::{Statement, StatementKind, Transformation};
pub use error::{ExecError, TransformError};
pub use exec::{execute, ExecutionContext, TraceMaps};
pub use parser::parse_transformation;
