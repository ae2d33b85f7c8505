//! Query syntax tree. `Display` prints text that parses back to the same tree.

use std::fmt;

use crate::value::Value;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var(String),
    Literal(Value),
    /// `V{Type}`: all vertices of a type.
    Extent(String),
    Attr(Box<Expr>, String),
    /// 0-based tuple index.
    Index(Box<Expr>, usize),
    Call(String, Vec<Expr>),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Eq(Box<Expr>, Box<Expr>),
    NotEq(Box<Expr>, Box<Expr>),
    /// A path application.
    ///
    /// With a start and no target it denotes the set of vertices reached from
    /// the start. With a target it is a boolean reachability test; without a
    /// start it denotes the vertices from which the target is reachable.
    /// Without either, every vertex is a start vertex.
    Path {
        start: Option<Box<Expr>>,
        path: PathExpr,
        target: Option<Box<Expr>>,
    },
    Comprehension(Box<Comprehension>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Declaration {
    pub vars: Vec<String>,
    pub domain: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    /// One expression reports plain values; more report tuples.
    Set(Vec<Expr>),
    Map(Expr, Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comprehension {
    pub declarations: Vec<Declaration>,
    pub filter: Option<Expr>,
    pub report: Report,
    pub bindings: Vec<(String, Expr)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arrow {
    /// `-->`: any outgoing edge.
    Forward,
    /// `<>--`: outgoing containment edges, whole to part.
    Containment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Repeat {
    Plus,
    Star,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Restriction {
    pub types: Vec<String>,
    /// Evaluated with `thisVertex` bound to each candidate.
    pub predicate: Option<Box<Expr>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PathExpr {
    Step { arrow: Arrow, role: Option<String> },
    Restrict(Restriction),
    Seq(Vec<PathExpr>),
    Alt(Vec<PathExpr>),
    Iterate(Box<PathExpr>, Repeat),
    Group(Box<PathExpr>),
}

impl PathExpr {
    pub fn step(arrow: Arrow, role: Option<&str>) -> Self {
        PathExpr::Step {
            arrow,
            role: role.map(str::to_string),
        }
    }

    pub fn restrict(types: &[&str]) -> Self {
        PathExpr::Restrict(Restriction {
            types: types.iter().map(|t| t.to_string()).collect(),
            predicate: None,
        })
    }

    /// Nesting depth of the expression tree.
    pub fn depth(&self) -> usize {
        match self {
            PathExpr::Step { .. } | PathExpr::Restrict(_) => 1,
            PathExpr::Seq(items) | PathExpr::Alt(items) => {
                1 + items.iter().map(PathExpr::depth).max().unwrap_or(0)
            }
            PathExpr::Iterate(body, _) | PathExpr::Group(body) => 1 + body.depth(),
        }
    }
}

impl fmt::Display for PathExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathExpr::Step { arrow, role } => {
                f.write_str(match arrow {
                    Arrow::Forward => "-->",
                    Arrow::Containment => "<>--",
                })?;
                if let Some(r) = role {
                    write!(f, "{{{r}}}")?;
                }
                Ok(())
            }
            PathExpr::Restrict(r) => {
                write!(f, "& {{{}", r.types.join(", "))?;
                if let Some(p) = &r.predicate {
                    write!(f, " @ {p}")?;
                }
                f.write_str("}")
            }
            PathExpr::Seq(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write_item(f, item)?;
                }
                Ok(())
            }
            PathExpr::Alt(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    write!(f, "{item}")?;
                }
                Ok(())
            }
            PathExpr::Iterate(body, repeat) => {
                match **body {
                    PathExpr::Seq(_) | PathExpr::Alt(_) => write!(f, "({body})")?,
                    _ => write!(f, "{body}")?,
                }
                f.write_str(match repeat {
                    Repeat::Plus => "+",
                    Repeat::Star => "*",
                })
            }
            PathExpr::Group(body) => write!(f, "({body})"),
        }
    }
}

// Sequences and alternatives nested inside a sequence need parentheses.
fn write_item(f: &mut fmt::Formatter<'_>, item: &PathExpr) -> fmt::Result {
    match item {
        PathExpr::Seq(_) | PathExpr::Alt(_) => write!(f, "({item})"),
        _ => write!(f, "{item}"),
    }
}

fn write_literal(f: &mut fmt::Formatter<'_>, v: &Value) -> fmt::Result {
    match v {
        Value::String(s) => write!(f, "{s:?}"),
        Value::Integer(i) => write!(f, "{i}"),
        Value::Boolean(b) => write!(f, "{b}"),
        other => write!(f, "{other:?}"),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => f.write_str(v),
            Expr::Literal(v) => write_literal(f, v),
            Expr::Extent(t) => write!(f, "V{{{t}}}"),
            Expr::Attr(e, a) => write!(f, "{}.{a}", Postfix(e)),
            Expr::Index(e, i) => write!(f, "{}[{i}]", Postfix(e)),
            Expr::Call(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Expr::Not(e) => write!(f, "not ({e})"),
            Expr::And(a, b) => write!(f, "({a}) and ({b})"),
            Expr::Or(a, b) => write!(f, "({a}) or ({b})"),
            Expr::Eq(a, b) => write!(f, "({a}) = ({b})"),
            Expr::NotEq(a, b) => write!(f, "({a}) <> ({b})"),
            Expr::Path {
                start,
                path,
                target,
            } => {
                if let Some(s) = start {
                    write!(f, "{} ", Postfix(s))?;
                }
                let text = path.to_string();
                // A leading `(` would read as a call or a parenthesized expression.
                if text.starts_with('(') {
                    f.write_str("& ")?;
                }
                f.write_str(&text)?;
                if let Some(t) = target {
                    write!(f, " {}", Postfix(t))?;
                }
                Ok(())
            }
            Expr::Comprehension(c) => write!(f, "{c}"),
        }
    }
}

/// Prints an expression so that it can be followed by `.x`, `[i]` or a path.
struct Postfix<'a>(&'a Expr);

impl fmt::Display for Postfix<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            e @ (Expr::Var(_)
            | Expr::Literal(_)
            | Expr::Extent(_)
            | Expr::Attr(..)
            | Expr::Index(..)
            | Expr::Call(..)) => write!(f, "{e}"),
            e => write!(f, "({e})"),
        }
    }
}

impl fmt::Display for Comprehension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("from ")?;
        for (i, d) in self.declarations.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}: {}", d.vars.join(", "), d.domain)?;
        }
        if let Some(w) = &self.filter {
            write!(f, " with {w}")?;
        }
        match &self.report {
            Report::Set(items) => {
                f.write_str(" reportSet ")?;
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{e}")?;
                }
            }
            Report::Map(k, v) => write!(f, " reportMap {k} -> {v}")?,
        }
        f.write_str(" end")?;
        for (i, (name, e)) in self.bindings.iter().enumerate() {
            f.write_str(if i == 0 { " where " } else { ", " })?;
            write!(f, "{name} := {e}")?;
        }
        Ok(())
    }
}
