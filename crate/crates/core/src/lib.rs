pub mod case;
pub mod graph;
pub mod io;
pub mod query;
#[cfg(any(test, feature = "testkit"))]
pub mod testkit;
pub mod transform;
pub mod value;

pub use graph::{ElementRef, Graph, GraphError, Schema};
pub use value::{Domain, EdgeId, Value, VertexId};
