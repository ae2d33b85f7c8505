use std::collections::{BTreeMap, BTreeSet};

use super::ast::{StatementKind, Transformation};
use super::error::{ExecError, TransformError};
use crate::graph::{
    split_qualified, ClassRef, EdgeClassSpec, ElementRef, Graph, GraphError, Schema,
};
use crate::query::{all_packages, resolve_type, Environment, Expr, QueryError};
use crate::value::{Domain, Value};

/// Archetype/image maps per target class, keyed by the class's simple name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TraceMaps {
    img: BTreeMap<String, BTreeMap<Value, ElementRef>>,
    arch: BTreeMap<String, BTreeMap<ElementRef, Value>>,
}

impl TraceMaps {
    pub fn classes(&self) -> impl Iterator<Item = &str> {
        self.img.keys().map(String::as_str)
    }

    pub fn img(&self, class: &str) -> Option<&BTreeMap<Value, ElementRef>> {
        self.img.get(class)
    }

    pub fn arch(&self, class: &str) -> Option<&BTreeMap<ElementRef, Value>> {
        self.arch.get(class)
    }

    pub fn image(&self, class: &str, archetype: &Value) -> Option<ElementRef> {
        self.img.get(class)?.get(archetype).copied()
    }

    pub fn archetype(&self, class: &str, element: ElementRef) -> Option<&Value> {
        self.arch.get(class)?.get(&element)
    }

    /// Checks that every img map and its arch map are mutually inverse.
    pub fn check_inverse(&self) -> Result<(), String> {
        if self.img.len() != self.arch.len() {
            return Err("img and arch cover different classes".into());
        }
        for (class, img) in &self.img {
            let arch = self
                .arch
                .get(class)
                .ok_or(format!("no arch map for {class}"))?;
            if img.len() != arch.len() {
                return Err(format!(
                    "{class}: {} images but {} archetypes",
                    img.len(),
                    arch.len()
                ));
            }
            for (a, e) in img {
                if arch.get(e) != Some(a) {
                    return Err(format!("{class}: arch(img({a:?})) differs"));
                }
            }
        }
        Ok(())
    }

    fn open(&mut self, class: &str) -> Result<(), GraphError> {
        if self.img.contains_key(class) {
            return Err(GraphError::DuplicateClassName(class.to_string()));
        }
        self.img.insert(class.to_string(), BTreeMap::new());
        self.arch.insert(class.to_string(), BTreeMap::new());
        Ok(())
    }

    fn record(&mut self, class: &str, archetype: Value, element: ElementRef) {
        self.img
            .get_mut(class)
            .unwrap()
            .insert(archetype.clone(), element);
        self.arch.get_mut(class).unwrap().insert(element, archetype);
    }
}

pub struct ExecutionContext<'s> {
    pub source: &'s Graph,
    pub target: Graph,
    pub globals: BTreeMap<String, Value>,
    pub trace: TraceMaps,
    imports: Vec<String>,
}

/// Runs every statement in order against `source`.
pub fn execute<'s>(
    t: &Transformation,
    source: &'s Graph,
) -> Result<ExecutionContext<'s>, ExecError> {
    let mut ctx = ExecutionContext::new(source, t.imports.clone());
    for (index, s) in t.statements.iter().enumerate() {
        ctx.apply(&s.kind).map_err(|error| ExecError {
            index,
            line: s.line,
            error,
        })?;
    }
    Ok(ctx)
}

fn trace_key(name: &str) -> String {
    split_qualified(name).1.to_string()
}

impl<'s> ExecutionContext<'s> {
    pub fn new(source: &'s Graph, imports: Vec<String>) -> Self {
        ExecutionContext {
            source,
            target: Graph::new(Schema::new("Target")),
            globals: BTreeMap::new(),
            trace: TraceMaps::default(),
            imports,
        }
    }

    pub fn imports(&self) -> &[String] {
        &self.imports
    }

    /// Applies one statement. Results are checked before anything is
    /// created, so a failing statement leaves the context unchanged.
    pub fn apply(&mut self, statement: &StatementKind) -> Result<(), TransformError> {
        match statement {
            StatementKind::GlobalBinding { name, query } => {
                if name.starts_with("img_") {
                    return Err(TransformError::ReservedName(name.clone()));
                }
                if self.globals.contains_key(name) {
                    return Err(TransformError::DuplicateBinding(name.clone()));
                }
                let v = self.eval(query)?;
                self.globals.insert(name.clone(), v);
                Ok(())
            }
            StatementKind::CreateVertexClass { name, query } => {
                self.create_vertex_class(name, query)
            }
            StatementKind::CreateEdgeClass {
                name,
                from_class,
                from_role,
                to_class,
                to_role,
                query,
            } => self.create_edge_class(
                name,
                (from_class, from_role.as_deref()),
                (to_class, to_role.as_deref()),
                query,
            ),
            StatementKind::AddSubClass {
                subclass,
                superclass,
            } => {
                let sub = self.target_class(subclass)?;
                let sup = self.target_class(superclass)?;
                self.target.schema_mut().add_specialization(sub, sup)?;
                Ok(())
            }
            StatementKind::CreateAttribute {
                owner,
                attribute,
                domain,
                default,
                query,
            } => {
                let class = self.target_class(owner)?;
                let schema = self.target.schema();
                if schema.attribute(class, attribute).is_some() {
                    return Err(GraphError::DuplicateAttribute {
                        class: schema.class_name(class).to_string(),
                        attribute: attribute.clone(),
                    }
                    .into());
                }
                let updates = match query {
                    Some(q) => {
                        let v = self.eval(q)?;
                        self.attribute_map(class, attribute, *domain, v)?
                    }
                    None => Vec::new(),
                };
                self.target.schema_mut().add_attribute(
                    class,
                    attribute,
                    *domain,
                    default.clone(),
                )?;
                self.write(attribute, updates)
            }
            StatementKind::SetAttributes {
                owner,
                attribute,
                query,
            } => {
                let class = self.target_class(owner)?;
                let schema = self.target.schema();
                let domain = schema
                    .attribute(class, attribute)
                    .ok_or_else(|| GraphError::UnknownAttribute {
                        class: schema.class_name(class).to_string(),
                        attribute: attribute.clone(),
                    })?
                    .domain;
                let v = self.eval(query)?;
                let updates = self.attribute_map(class, attribute, domain, v)?;
                self.write(attribute, updates)
            }
        }
    }

    /// Evaluates a query on the source graph with globals and `img_<Class>` maps in scope.
    pub fn eval(&self, query: &Expr) -> Result<Value, TransformError> {
        let mut scope = self.globals.clone();
        for (class, img) in &self.trace.img {
            let map = img
                .iter()
                .map(|(a, e)| (a.clone(), Value::from(*e)))
                .collect();
            scope.insert(format!("img_{class}"), Value::Map(map));
        }
        Environment::new(self.source, &self.imports, &scope)
            .eval(query)
            .map_err(|e| match e {
                QueryError::UnboundVariable(n) if n.starts_with("img_") => {
                    TransformError::UnknownTraceMap(n)
                }
                e => e.into(),
            })
    }

    fn target_class(&self, name: &str) -> Result<ClassRef, TransformError> {
        let schema = self.target.schema();
        resolve_type(name, &all_packages(schema), schema).map_err(|e| match e {
            QueryError::UnknownType(n) => GraphError::UnknownClass(n).into(),
            e => e.into(),
        })
    }

    fn img_of(
        &self,
        class: ClassRef,
    ) -> Result<(String, &BTreeMap<Value, ElementRef>), TransformError> {
        let key = trace_key(self.target.schema().class_name(class));
        match self.trace.img(&key) {
            Some(img) => Ok((key, img)),
            None => Err(TransformError::UnknownTraceMap(format!("img_{key}"))),
        }
    }

    fn create_vertex_class(&mut self, name: &str, query: &Expr) -> Result<(), TransformError> {
        let key = trace_key(name);
        if self.trace.img(&key).is_some() {
            return Err(GraphError::DuplicateClassName(name.to_string()).into());
        }
        let archetypes = match self.eval(query)? {
            Value::Set(s) => s,
            other => return Err(TransformError::NotASet(other.kind())),
        };
        let class = self.target.schema_mut().add_vertex_class(name, false)?;
        self.trace.open(&key)?;
        for a in archetypes {
            let v = self.target.create_vertex(class)?;
            self.trace.record(&key, a, ElementRef::Vertex(v));
        }
        Ok(())
    }

    fn create_edge_class(
        &mut self,
        name: &str,
        from: (&str, Option<&str>),
        to: (&str, Option<&str>),
        query: &Expr,
    ) -> Result<(), TransformError> {
        let key = trace_key(name);
        if self.trace.img(&key).is_some() {
            return Err(GraphError::DuplicateClassName(name.to_string()).into());
        }
        let vertex_class = |this: &Self, n: &str| match this.target_class(n)? {
            ClassRef::Vertex(v) => Ok(v),
            ClassRef::Edge(_) => Err(TransformError::from(GraphError::UnknownClass(format!(
                "{n} (an edge class, not a vertex class)"
            )))),
        };
        let from_class = vertex_class(self, from.0)?;
        let to_class = vertex_class(self, to.0)?;
        let triples = match self.eval(query)? {
            Value::Set(s) => s,
            other => {
                return Err(TransformError::NotTripleSet(format!(
                    "got {}",
                    other.kind()
                )));
            }
        };
        let (from_key, from_img) = self.img_of(ClassRef::Vertex(from_class))?;
        let (to_key, to_img) = self.img_of(ClassRef::Vertex(to_class))?;
        let mut seen = BTreeSet::new();
        let mut planned = Vec::new();
        for item in triples {
            let Value::Tuple(mut parts) = item else {
                return Err(TransformError::NotTripleSet(format!(
                    "member {} is not a triple",
                    self.source.render_value(&item)
                )));
            };
            if parts.len() != 3 {
                return Err(TransformError::NotTripleSet(format!(
                    "member {} has {} components",
                    self.source.render_value(&Value::Tuple(parts.clone())),
                    parts.len()
                )));
            }
            let target_arch = parts.pop().unwrap();
            let source_arch = parts.pop().unwrap();
            let archetype = parts.pop().unwrap();
            if !seen.insert(archetype.clone()) {
                return Err(TransformError::DuplicateArchetype {
                    class: key,
                    archetype: self.source.render_value(&archetype),
                });
            }
            let endpoint =
                |img: &BTreeMap<Value, ElementRef>, class: &str, a: &Value| match img.get(a) {
                    Some(ElementRef::Vertex(v)) => Ok(*v),
                    _ => Err(TransformError::UnknownArchetype {
                        class: class.to_string(),
                        archetype: self.source.render_value(a),
                    }),
                };
            let s = endpoint(from_img, &from_key, &source_arch)?;
            let t = endpoint(to_img, &to_key, &target_arch)?;
            planned.push((archetype, s, t));
        }
        let spec = EdgeClassSpec::new(name, from_class, to_class).roles(from.1, to.1);
        let class = self.target.schema_mut().add_edge_class(spec)?;
        self.trace.open(&key)?;
        for (a, s, t) in planned {
            let e = self.target.create_edge(class, s, t)?;
            self.trace.record(&key, a, ElementRef::Edge(e));
        }
        Ok(())
    }

    fn attribute_map(
        &self,
        class: ClassRef,
        attribute: &str,
        domain: Domain,
        value: Value,
    ) -> Result<Vec<(ElementRef, Value)>, TransformError> {
        let Value::Map(map) = value else {
            return Err(TransformError::NotAMap(value.kind()));
        };
        let (key, img) = self.img_of(class)?;
        let mut out = Vec::with_capacity(map.len());
        for (a, v) in map {
            let Some(&element) = img.get(&a) else {
                return Err(TransformError::UnknownArchetype {
                    class: key,
                    archetype: self.source.render_value(&a),
                });
            };
            if !v.is_undefined() && v.domain() != Some(domain) {
                return Err(GraphError::DomainMismatch {
                    attribute: attribute.to_string(),
                    expected: domain,
                    found: v.kind(),
                }
                .into());
            }
            out.push((element, v));
        }
        Ok(out)
    }

    fn write(
        &mut self,
        attribute: &str,
        updates: Vec<(ElementRef, Value)>,
    ) -> Result<(), TransformError> {
        for (element, v) in updates {
            self.target.set_attribute(element, attribute, v)?;
        }
        Ok(())
    }
}
