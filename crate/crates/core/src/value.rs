//! The value universe shared by attribute storage and query evaluation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Dense index of a vertex inside its graph. Ascending ids follow creation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

/// Dense index of an edge inside its graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Attribute domains supported by schemas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Domain {
    String,
    Integer,
    Boolean,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::String => "String",
            Domain::Integer => "Integer",
            Domain::Boolean => "Boolean",
        }
    }

    pub fn parse(name: &str) -> Option<Domain> {
        match name {
            "String" => Some(Domain::String),
            "Integer" => Some(Domain::Integer),
            "Boolean" => Some(Domain::Boolean),
            _ => None,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A query or attribute value.
///
/// Equality and ordering are structural; element references compare by id.
/// Sets and maps are ordered containers, so iteration over a set of
/// elements is ascending by element id and iteration is deterministic for
/// every other kind of member as well.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Undefined,
    Boolean(bool),
    Integer(i64),
    String(String),
    Vertex(VertexId),
    Edge(EdgeId),
    Tuple(Vec<Value>),
    Set(BTreeSet<Value>),
    Map(BTreeMap<Value, Value>),
}

impl Value {
    pub fn str(s: impl Into<String>) -> Value {
        Value::String(s.into())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Value::Undefined => "undefined",
            Value::Boolean(_) => "Boolean",
            Value::Integer(_) => "Integer",
            Value::String(_) => "String",
            Value::Vertex(_) => "Vertex",
            Value::Edge(_) => "Edge",
            Value::Tuple(_) => "Tuple",
            Value::Set(_) => "Set",
            Value::Map(_) => "Map",
        }
    }

    pub fn is_undefined(&self) -> bool {
        matches!(self, Value::Undefined)
    }

    /// The domain of a scalar value, if it has one.
    pub fn domain(&self) -> Option<Domain> {
        match self {
            Value::String(_) => Some(Domain::String),
            Value::Integer(_) => Some(Domain::Integer),
            Value::Boolean(_) => Some(Domain::Boolean),
            _ => None,
        }
    }

    pub fn as_vertex(&self) -> Option<VertexId> {
        match self {
            Value::Vertex(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::String(s) => Some(s),
            _ => None,
        }
    }

    /// Query-level equality: anything compared with undefined is false.
    pub fn query_eq(&self, other: &Value) -> bool {
        if self.is_undefined() || other.is_undefined() {
            return false;
        }
        self == other
    }

    /// Query-level inequality, also false when either side is undefined.
    pub fn query_ne(&self, other: &Value) -> bool {
        if self.is_undefined() || other.is_undefined() {
            return false;
        }
        self != other
    }

    /// Renders the value, naming elements through `name_of`.
    pub fn render_with(
        &self,
        vertex_name: &dyn Fn(VertexId) -> String,
        edge_name: &dyn Fn(EdgeId) -> String,
    ) -> String {
        let mut out = String::new();
        self.render_into(&mut out, vertex_name, edge_name);
        out
    }

    fn render_into(
        &self,
        out: &mut String,
        vertex_name: &dyn Fn(VertexId) -> String,
        edge_name: &dyn Fn(EdgeId) -> String,
    ) {
        match self {
            Value::Undefined => out.push_str("undefined"),
            Value::Boolean(b) => out.push_str(if *b { "true" } else { "false" }),
            Value::Integer(i) => out.push_str(&i.to_string()),
            Value::String(s) => out.push_str(&quote(s)),
            Value::Vertex(v) => out.push_str(&vertex_name(*v)),
            Value::Edge(e) => out.push_str(&edge_name(*e)),
            Value::Tuple(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    item.render_into(out, vertex_name, edge_name);
                }
                out.push(']');
            }
            Value::Set(items) => {
                // Rendered text is sorted so output stays stable no matter
                // how element ids relate to element names.
                let mut parts: Vec<String> = items
                    .iter()
                    .map(|v| v.render_with(vertex_name, edge_name))
                    .collect();
                parts.sort();
                out.push('{');
                out.push_str(&parts.join(", "));
                out.push('}');
            }
            Value::Map(entries) => {
                let mut parts: Vec<String> = entries
                    .iter()
                    .map(|(k, v)| {
                        format!(
                            "{} -> {}",
                            k.render_with(vertex_name, edge_name),
                            v.render_with(vertex_name, edge_name)
                        )
                    })
                    .collect();
                parts.sort();
                out.push('{');
                out.push_str(&parts.join(", "));
                out.push('}');
            }
        }
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::String(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::String(s)
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Integer(i)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Boolean(b)
    }
}

impl From<VertexId> for Value {
    fn from(v: VertexId) -> Self {
        Value::Vertex(v)
    }
}

impl From<EdgeId> for Value {
    fn from(e: EdgeId) -> Self {
        Value::Edge(e)
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undefined_never_compares() {
        let u = Value::Undefined;
        assert!(!u.query_eq(&Value::Undefined));
        assert!(!u.query_ne(&Value::str("x")));
        assert!(!Value::str("x").query_eq(&u));
        assert!(Value::str("x").query_ne(&Value::str("y")));
    }

    #[test]
    fn element_sets_iterate_by_id() {
        let set: BTreeSet<Value> = [VertexId(7), VertexId(2), VertexId(5)]
            .into_iter()
            .map(Value::Vertex)
            .collect();
        let ids: Vec<_> = set.iter().filter_map(Value::as_vertex).collect();
        assert_eq!(ids, vec![VertexId(2), VertexId(5), VertexId(7)]);
    }

    #[test]
    fn render_is_sorted_and_bracketed() {
        let names = |v: VertexId| format!("v{}", v.0);
        let edges = |e: EdgeId| format!("e{}", e.0);
        let tuple = Value::Tuple(vec![Value::Vertex(VertexId(1)), Value::str("a\"b")]);
        assert_eq!(tuple.render_with(&names, &edges), "[v1, \"a\\\"b\"]");
        let set = Value::Set([Value::str("b"), Value::str("a")].into_iter().collect());
        assert_eq!(set.render_with(&names, &edges), "{\"a\", \"b\"}");
        assert_eq!(
            Value::Set(BTreeSet::new()).render_with(&names, &edges),
            "{}"
        );
    }
}
