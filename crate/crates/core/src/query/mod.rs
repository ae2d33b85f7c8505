//! The query language: parsing, evaluation and regular path expressions.

pub mod ast;
mod error;
mod eval;
pub mod lexer;
mod parser;
mod path;

pub use ast::{Arrow, Comprehension, Declaration, Expr, PathExpr, Repeat, Report, Restriction};
pub use error::QueryError;
pub use eval::{
    all_packages, is_empty, key_set, resolve_type, the_element, tup, EmptyScope, Environment, Scope,
};
pub use lexer::{Pos, SyntaxError};
pub use parser::parse_query;
pub(crate) use parser::Parser;
