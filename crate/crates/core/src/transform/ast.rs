use crate::query::Expr;
use crate::value::{Domain, Value};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Transformation {
    /// Package names from `import pkg.*;`, in order of appearance.
    pub imports: Vec<String>,
    pub statements: Vec<Statement>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    /// 1-based line of the statement's first token.
    pub line: u32,
    pub kind: StatementKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StatementKind {
    GlobalBinding {
        name: String,
        query: Expr,
    },
    CreateVertexClass {
        name: String,
        query: Expr,
    },
    CreateEdgeClass {
        name: String,
        from_class: String,
        from_role: Option<String>,
        to_class: String,
        to_role: Option<String>,
        query: Expr,
    },
    AddSubClass {
        subclass: String,
        superclass: String,
    },
    CreateAttribute {
        owner: String,
        attribute: String,
        domain: Domain,
        default: Option<Value>,
        query: Option<Expr>,
    },
    SetAttributes {
        owner: String,
        attribute: String,
        query: Expr,
    },
}

impl StatementKind {
    pub fn operation(&self) -> &'static str {
        match self {
            StatementKind::GlobalBinding { .. } => "Binding",
            StatementKind::CreateVertexClass { .. } => "CreateVertexClass",
            StatementKind::CreateEdgeClass { .. } => "CreateEdgeClass",
            StatementKind::AddSubClass { .. } => "AddSubClass",
            StatementKind::CreateAttribute { .. } => "CreateAttribute",
            StatementKind::SetAttributes { .. } => "SetAttributes",
        }
    }
}
