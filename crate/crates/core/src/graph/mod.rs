//! Schema-typed, directed, attributed graphs.

mod error;
mod instance;
mod schema;

pub use error::{GraphError, Rule, ValidationError};
pub use instance::{Edge, ElementRef, Graph, Vertex};
pub use schema::{
    split_qualified, AttributeDef, ClassRef, EdgeClass, EdgeClassId, EdgeClassSpec, EdgeKind,
    Multiplicity, Schema, VertexClass, VertexClassId,
};
