//! Query evaluation over a read-only graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::ast::{Comprehension, Expr, PathExpr, Report};
use super::error::QueryError;
use crate::graph::{ClassRef, ElementRef, Graph, Schema, VertexClassId};
use crate::value::{Value, VertexId};

/// Named values visible to a query beneath its own local variables.
pub trait Scope {
    fn lookup(&self, name: &str) -> Option<&Value>;
}

impl Scope for BTreeMap<String, Value> {
    fn lookup(&self, name: &str) -> Option<&Value> {
        self.get(name)
    }
}

impl Scope for HashMap<String, Value> {
    fn lookup(&self, name: &str) -> Option<&Value> {
        self.get(name)
    }
}

/// A scope with no bindings.
pub struct EmptyScope;

impl Scope for EmptyScope {
    fn lookup(&self, _name: &str) -> Option<&Value> {
        None
    }
}

/// Everything a query needs: the graph, the imported packages used to
/// resolve unqualified type names, and the global bindings.
#[derive(Clone, Copy)]
pub struct Environment<'e> {
    pub graph: &'e Graph,
    pub imports: &'e [String],
    pub scope: &'e dyn Scope,
}

impl<'e> Environment<'e> {
    pub fn new(graph: &'e Graph, imports: &'e [String], scope: &'e dyn Scope) -> Self {
        Environment {
            graph,
            imports,
            scope,
        }
    }

    pub fn eval(&self, expr: &Expr) -> Result<Value, QueryError> {
        Evaluator::new(*self).eval(expr)
    }

    /// Vertices reachable from any start vertex by a walk matching `path`.
    pub fn eval_path(
        &self,
        start: &BTreeSet<VertexId>,
        path: &PathExpr,
    ) -> Result<BTreeSet<VertexId>, QueryError> {
        Evaluator::new(*self).image(start, path)
    }

    pub fn eval_path_exists(
        &self,
        start: VertexId,
        path: &PathExpr,
        end: VertexId,
    ) -> Result<bool, QueryError> {
        Ok(self
            .eval_path(&BTreeSet::from([start]), path)?
            .contains(&end))
    }
}

/// Resolves a type name. Qualified names are looked up directly; a simple
/// name must be declared by exactly one imported package or the default
/// package.
pub fn resolve_type(
    name: &str,
    imports: &[String],
    schema: &Schema,
) -> Result<ClassRef, QueryError> {
    if name.contains('.') {
        return schema
            .lookup(name)
            .ok_or_else(|| QueryError::UnknownType(name.to_string()));
    }
    let mut found: Vec<(String, ClassRef)> = schema
        .classes_named(name)
        .into_iter()
        .filter(|(pkg, _)| pkg.is_empty() || imports.iter().any(|i| i == pkg))
        .collect();
    found.dedup();
    match found.len() {
        0 => Err(QueryError::UnknownType(name.to_string())),
        1 => Ok(found[0].1),
        _ => Err(QueryError::AmbiguousType {
            name: name.to_string(),
            candidates: found
                .iter()
                .map(|(_, c)| schema.class_name(*c).to_string())
                .collect::<Vec<_>>()
                .join(", "),
        }),
    }
}

pub(super) struct Evaluator<'e> {
    pub(super) env: Environment<'e>,
    locals: Vec<(String, Value)>,
    masks: HashMap<String, Vec<bool>>,
}

impl<'e> Evaluator<'e> {
    pub(super) fn new(env: Environment<'e>) -> Self {
        Evaluator {
            env,
            locals: Vec::new(),
            masks: HashMap::new(),
        }
    }

    fn graph(&self) -> &'e Graph {
        self.env.graph
    }

    pub(super) fn push(&mut self, name: &str, value: Value) {
        self.locals.push((name.to_string(), value));
    }

    pub(super) fn pop(&mut self) {
        self.locals.pop();
    }

    fn lookup(&self, name: &str) -> Result<Value, QueryError> {
        if let Some((_, v)) = self.locals.iter().rev().find(|(n, _)| n == name) {
            return Ok(v.clone());
        }
        self.env
            .scope
            .lookup(name)
            .cloned()
            .ok_or_else(|| QueryError::UnboundVariable(name.to_string()))
    }

    pub(super) fn vertex_class(&self, name: &str) -> Result<VertexClassId, QueryError> {
        match resolve_type(name, self.env.imports, self.graph().schema())? {
            ClassRef::Vertex(id) => Ok(id),
            ClassRef::Edge(_) => Err(QueryError::TypeError(format!(
                "`{name}` is an edge class, expected a vertex class"
            ))),
        }
    }

    /// Conformance mask for a vertex type name, cached per evaluation.
    pub(super) fn type_mask(&mut self, name: &str) -> Result<&[bool], QueryError> {
        if !self.masks.contains_key(name) {
            let id = self.vertex_class(name)?;
            let mask = self.graph().schema().vertex_conformance_mask(id);
            self.masks.insert(name.to_string(), mask);
        }
        Ok(&self.masks[name])
    }

    pub(super) fn truthy(&self, v: &Value) -> Result<bool, QueryError> {
        match v {
            Value::Boolean(b) => Ok(*b),
            Value::Undefined => Ok(false),
            other => Err(QueryError::TypeError(format!(
                "expected a Boolean, got {}",
                other.kind()
            ))),
        }
    }

    pub(super) fn eval(&mut self, expr: &Expr) -> Result<Value, QueryError> {
        match expr {
            Expr::Var(name) => self.lookup(name),
            Expr::Literal(v) => Ok(v.clone()),
            Expr::Extent(t) => {
                let id = self.vertex_class(t)?;
                Ok(Value::Set(
                    self.graph()
                        .vertices_of(id)
                        .into_iter()
                        .map(Value::Vertex)
                        .collect(),
                ))
            }
            Expr::Attr(base, name) => match self.eval(base)? {
                Value::Vertex(v) => Ok(self.graph().get_attribute(ElementRef::Vertex(v), name)?),
                Value::Edge(e) => Ok(self.graph().get_attribute(ElementRef::Edge(e), name)?),
                Value::Undefined => Ok(Value::Undefined),
                other => Err(QueryError::TypeError(format!(
                    "attribute access `.{name}` on {}",
                    other.kind()
                ))),
            },
            Expr::Index(base, index) => match self.eval(base)? {
                Value::Tuple(items) => {
                    let len = items.len();
                    items
                        .into_iter()
                        .nth(*index)
                        .ok_or(QueryError::IndexOutOfRange { index: *index, len })
                }
                Value::Undefined => Ok(Value::Undefined),
                other => Err(QueryError::TypeError(format!(
                    "index [{index}] on {}",
                    other.kind()
                ))),
            },
            Expr::Call(name, args) => {
                let values = args
                    .iter()
                    .map(|a| self.eval(a))
                    .collect::<Result<Vec<_>, _>>()?;
                call_builtin(name, values)
            }
            Expr::Not(e) => {
                let v = self.eval(e)?;
                Ok(Value::Boolean(!self.truthy(&v)?))
            }
            Expr::And(a, b) => {
                let a = self.eval(a)?;
                if !self.truthy(&a)? {
                    return Ok(Value::Boolean(false));
                }
                let b = self.eval(b)?;
                Ok(Value::Boolean(self.truthy(&b)?))
            }
            Expr::Or(a, b) => {
                let a = self.eval(a)?;
                if self.truthy(&a)? {
                    return Ok(Value::Boolean(true));
                }
                let b = self.eval(b)?;
                Ok(Value::Boolean(self.truthy(&b)?))
            }
            Expr::Eq(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                Ok(Value::Boolean(a.query_eq(&b)))
            }
            Expr::NotEq(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                Ok(Value::Boolean(a.query_ne(&b)))
            }
            Expr::Path {
                start,
                path,
                target,
            } => self.path_application(start.as_deref(), path, target.as_deref()),
            Expr::Comprehension(c) => self.comprehension(c),
        }
    }

    fn vertex_set(&self, v: Value, what: &str) -> Result<BTreeSet<VertexId>, QueryError> {
        match v {
            Value::Vertex(v) => Ok(BTreeSet::from([v])),
            Value::Undefined => Ok(BTreeSet::new()),
            Value::Set(items) => items
                .into_iter()
                .map(|i| match i {
                    Value::Vertex(v) => Ok(v),
                    other => Err(QueryError::TypeError(format!(
                        "{what} contains a {}, expected vertices",
                        other.kind()
                    ))),
                })
                .collect(),
            other => Err(QueryError::TypeError(format!(
                "{what} must be a vertex or a set of vertices, got {}",
                other.kind()
            ))),
        }
    }

    fn path_application(
        &mut self,
        start: Option<&Expr>,
        path: &PathExpr,
        target: Option<&Expr>,
    ) -> Result<Value, QueryError> {
        let target = match target {
            None => None,
            Some(t) => match self.eval(t)? {
                Value::Vertex(v) => Some(Some(v)),
                Value::Undefined => Some(None),
                other => {
                    return Err(QueryError::TypeError(format!(
                        "path target must be a vertex, got {}",
                        other.kind()
                    )))
                }
            },
        };
        match start {
            Some(s) => {
                let s = self.eval(s)?;
                let start = self.vertex_set(s, "path start")?;
                match target {
                    None => Ok(Value::Set(
                        self.image(&start, path)?
                            .into_iter()
                            .map(Value::Vertex)
                            .collect(),
                    )),
                    Some(None) => Ok(Value::Boolean(false)),
                    Some(Some(t)) => Ok(Value::Boolean(self.image(&start, path)?.contains(&t))),
                }
            }
            None => match target {
                None => {
                    let all: BTreeSet<VertexId> = self.graph().vertex_ids().collect();
                    Ok(Value::Set(
                        self.image(&all, path)?
                            .into_iter()
                            .map(Value::Vertex)
                            .collect(),
                    ))
                }
                Some(None) => Ok(Value::Set(BTreeSet::new())),
                Some(Some(t)) => {
                    let mut out = BTreeSet::new();
                    for v in self.graph().vertex_ids() {
                        if self.image(&BTreeSet::from([v]), path)?.contains(&t) {
                            out.insert(Value::Vertex(v));
                        }
                    }
                    Ok(Value::Set(out))
                }
            },
        }
    }

    fn comprehension(&mut self, c: &Comprehension) -> Result<Value, QueryError> {
        let vars: Vec<(&str, &Expr)> = c
            .declarations
            .iter()
            .flat_map(|d| d.vars.iter().map(move |v| (v.as_str(), &d.domain)))
            .collect();
        let mut acc = Accumulator::new(&c.report);
        self.iterate(c, &vars, 0, &mut acc)?;
        Ok(acc.finish())
    }

    fn iterate(
        &mut self,
        c: &Comprehension,
        vars: &[(&str, &Expr)],
        depth: usize,
        acc: &mut Accumulator,
    ) -> Result<(), QueryError> {
        if depth == vars.len() {
            return self.visit_combination(c, acc);
        }
        let (name, domain) = vars[depth];
        let members: Vec<Value> = match self.eval(domain)? {
            Value::Set(items) => items.into_iter().collect(),
            Value::Tuple(items) => items,
            other => {
                return Err(QueryError::TypeError(format!(
                    "domain of `{name}` must be a set, got {}",
                    other.kind()
                )))
            }
        };
        for m in members {
            self.push(name, m);
            let r = self.iterate(c, vars, depth + 1, acc);
            self.pop();
            r?;
        }
        Ok(())
    }

    fn visit_combination(
        &mut self,
        c: &Comprehension,
        acc: &mut Accumulator,
    ) -> Result<(), QueryError> {
        let mut pushed = 0;
        let result = (|| {
            for (name, e) in &c.bindings {
                let v = self.eval(e)?;
                self.push(name, v);
                pushed += 1;
            }
            if let Some(f) = &c.filter {
                let keep = self.eval(f)?;
                if !self.truthy(&keep)? {
                    return Ok(());
                }
            }
            match &c.report {
                Report::Set(items) => {
                    let mut values = items
                        .iter()
                        .map(|e| self.eval(e))
                        .collect::<Result<Vec<_>, _>>()?;
                    let v = if values.len() == 1 {
                        values.pop().unwrap()
                    } else {
                        Value::Tuple(values)
                    };
                    acc.insert(v);
                    Ok(())
                }
                Report::Map(k, v) => {
                    let k = self.eval(k)?;
                    let v = self.eval(v)?;
                    acc.insert_entry(k, v, self.graph())
                }
            }
        })();
        for _ in 0..pushed {
            self.pop();
        }
        result
    }
}

enum Accumulator {
    Set(BTreeSet<Value>),
    Map(BTreeMap<Value, Value>),
}

impl Accumulator {
    fn new(report: &Report) -> Self {
        match report {
            Report::Set(_) => Accumulator::Set(BTreeSet::new()),
            Report::Map(..) => Accumulator::Map(BTreeMap::new()),
        }
    }

    fn insert(&mut self, v: Value) {
        if let Accumulator::Set(s) = self {
            s.insert(v);
        }
    }

    fn insert_entry(&mut self, k: Value, v: Value, graph: &Graph) -> Result<(), QueryError> {
        let Accumulator::Map(m) = self else {
            return Ok(());
        };
        match m.get(&k) {
            Some(existing) if *existing != v => Err(QueryError::MapKeyConflict {
                key: graph.render_value(&k),
                existing: graph.render_value(existing),
                new: graph.render_value(&v),
            }),
            Some(_) => Ok(()),
            None => {
                m.insert(k, v);
                Ok(())
            }
        }
    }

    fn finish(self) -> Value {
        match self {
            Accumulator::Set(s) => Value::Set(s),
            Accumulator::Map(m) => Value::Map(m),
        }
    }
}

fn call_builtin(name: &str, mut args: Vec<Value>) -> Result<Value, QueryError> {
    let arity = |n: usize, args: &[Value]| {
        if args.len() == n {
            Ok(())
        } else {
            Err(QueryError::TypeError(format!(
                "{name} expects {n} argument(s), got {}",
                args.len()
            )))
        }
    };
    match name {
        "theElement" => {
            arity(1, &args)?;
            the_element(args.pop().unwrap())
        }
        "isEmpty" => {
            arity(1, &args)?;
            is_empty(&args[0])
        }
        "keySet" => {
            arity(1, &args)?;
            key_set(args.pop().unwrap())
        }
        "tup" => tup(args),
        _ => Err(QueryError::UnknownFunction(name.to_string())),
    }
}

/// The only member of a one-element set.
pub fn the_element(v: Value) -> Result<Value, QueryError> {
    match v {
        Value::Set(items) => {
            if items.len() != 1 {
                return Err(QueryError::NotSingleton(items.len()));
            }
            Ok(items.into_iter().next().unwrap())
        }
        other => Err(QueryError::NotACollection {
            function: "theElement",
            found: other.kind(),
        }),
    }
}

pub fn is_empty(v: &Value) -> Result<Value, QueryError> {
    match v {
        Value::Set(s) => Ok(Value::Boolean(s.is_empty())),
        Value::Map(m) => Ok(Value::Boolean(m.is_empty())),
        other => Err(QueryError::TypeError(format!(
            "isEmpty expects a Set or Map, got {}",
            other.kind()
        ))),
    }
}

pub fn key_set(v: Value) -> Result<Value, QueryError> {
    match v {
        Value::Map(m) => Ok(Value::Set(m.into_keys().collect())),
        other => Err(QueryError::TypeError(format!(
            "keySet expects a Map, got {}",
            other.kind()
        ))),
    }
}

pub fn tup(values: Vec<Value>) -> Result<Value, QueryError> {
    if values.is_empty() {
        return Err(QueryError::TypeError(
            "tup expects at least one value".into(),
        ));
    }
    Ok(Value::Tuple(values))
}

/// Simple names of the schema packages, usable as an import list that
/// makes every unambiguous simple name resolvable.
pub fn all_packages(schema: &Schema) -> Vec<String> {
    schema.packages().map(str::to_string).collect()
}
