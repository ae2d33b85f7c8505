//! Instance level: typed vertices and edges carrying attribute values.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use super::error::{GraphError, Rule, ValidationError};
use super::schema::{ClassRef, EdgeClassId, Schema, VertexClassId};
use crate::value::{EdgeId, Value, VertexId};

/// Reference to either kind of graph element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementRef {
    Vertex(VertexId),
    Edge(EdgeId),
}

impl From<ElementRef> for Value {
    fn from(e: ElementRef) -> Self {
        match e {
            ElementRef::Vertex(v) => Value::Vertex(v),
            ElementRef::Edge(e) => Value::Edge(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub key: String,
    pub class: VertexClassId,
    values: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub key: String,
    pub class: EdgeClassId,
    pub from: VertexId,
    pub to: VertexId,
    values: BTreeMap<String, Value>,
}

impl Vertex {
    /// Explicitly written attribute values.
    pub fn stored_values(&self) -> &BTreeMap<String, Value> {
        &self.values
    }
}

impl Edge {
    pub fn stored_values(&self) -> &BTreeMap<String, Value> {
        &self.values
    }
}

/// A graph together with the schema it conforms to.
///
/// Elements are only ever added; ids are dense and follow creation order.
/// Every element also has a string key, unique across vertices and edges,
/// which is what documents and diagnostics use.
#[derive(Debug, Clone)]
pub struct Graph {
    schema: Schema,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    outgoing: Vec<Vec<EdgeId>>,
    keys: HashMap<String, ElementRef>,
}

impl Graph {
    pub fn new(schema: Schema) -> Self {
        Graph {
            schema,
            vertices: Vec::new(),
            edges: Vec::new(),
            outgoing: Vec::new(),
            keys: HashMap::new(),
        }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// Schema mutation is additive only, so existing elements stay valid.
    pub fn schema_mut(&mut self) -> &mut Schema {
        &mut self.schema
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, id: VertexId) -> &Vertex {
        &self.vertices[id.index()]
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.index()]
    }

    pub fn contains_vertex(&self, id: VertexId) -> bool {
        id.index() < self.vertices.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    /// Vertices whose type conforms to `class`, in creation order.
    pub fn vertices_of(&self, class: VertexClassId) -> Vec<VertexId> {
        let mask = self.schema.vertex_conformance_mask(class);
        self.vertex_ids()
            .filter(|v| mask[self.vertex(*v).class.0 as usize])
            .collect()
    }

    pub fn edges_of(&self, class: EdgeClassId) -> Vec<EdgeId> {
        self.edge_ids()
            .filter(|e| {
                self.schema
                    .conforms(ClassRef::Edge(self.edge(*e).class), ClassRef::Edge(class))
            })
            .collect()
    }

    /// Outgoing edges of `v`, in creation order.
    pub fn outgoing(&self, v: VertexId) -> &[EdgeId] {
        &self.outgoing[v.index()]
    }

    pub fn is_instance_of(&self, v: VertexId, class: VertexClassId) -> bool {
        self.schema.vertex_conforms(self.vertex(v).class, class)
    }

    pub fn class_of(&self, element: ElementRef) -> ClassRef {
        match element {
            ElementRef::Vertex(v) => ClassRef::Vertex(self.vertex(v).class),
            ElementRef::Edge(e) => ClassRef::Edge(self.edge(e).class),
        }
    }

    pub fn key_of(&self, element: ElementRef) -> &str {
        match element {
            ElementRef::Vertex(v) => &self.vertex(v).key,
            ElementRef::Edge(e) => &self.edge(e).key,
        }
    }

    pub fn find(&self, key: &str) -> Option<ElementRef> {
        self.keys.get(key).copied()
    }

    fn fresh_key(&self, prefix: char, mut n: usize) -> String {
        loop {
            let key = format!("{prefix}{n}");
            if !self.keys.contains_key(&key) {
                return key;
            }
            n += 1;
        }
    }

    pub fn create_vertex(&mut self, class: VertexClassId) -> Result<VertexId, GraphError> {
        let key = self.fresh_key('v', self.vertices.len() + 1);
        self.create_vertex_with_key(class, key)
    }

    pub fn create_vertex_with_key(
        &mut self,
        class: VertexClassId,
        key: impl Into<String>,
    ) -> Result<VertexId, GraphError> {
        let key = key.into();
        let vc = self.schema.vertex_class(class);
        if vc.is_abstract {
            return Err(GraphError::AbstractInstantiation(vc.qualified_name.clone()));
        }
        if self.keys.contains_key(&key) {
            return Err(GraphError::DuplicateId(key));
        }
        let id = VertexId(self.vertices.len() as u32);
        self.keys.insert(key.clone(), ElementRef::Vertex(id));
        self.vertices.push(Vertex {
            key,
            class,
            values: BTreeMap::new(),
        });
        self.outgoing.push(Vec::new());
        Ok(id)
    }

    pub fn create_edge(
        &mut self,
        class: EdgeClassId,
        from: VertexId,
        to: VertexId,
    ) -> Result<EdgeId, GraphError> {
        let key = self.fresh_key('e', self.edges.len() + 1);
        self.create_edge_with_key(class, from, to, key)
    }

    pub fn create_edge_with_key(
        &mut self,
        class: EdgeClassId,
        from: VertexId,
        to: VertexId,
        key: impl Into<String>,
    ) -> Result<EdgeId, GraphError> {
        let key = key.into();
        let ec = self.schema.edge_class(class);
        if ec.is_abstract {
            return Err(GraphError::AbstractInstantiation(ec.qualified_name.clone()));
        }
        for (end, v, expected) in [("from", from, ec.from), ("to", to, ec.to)] {
            if !self.contains_vertex(v) {
                return Err(GraphError::DanglingEndpoint(format!("#{}", v.0)));
            }
            let found = self.vertex(v).class;
            if !self.schema.vertex_conforms(found, expected) {
                return Err(GraphError::TypeNonConformance {
                    edge_class: ec.qualified_name.clone(),
                    end,
                    expected: self.schema.vertex_class(expected).qualified_name.clone(),
                    found: self.schema.vertex_class(found).qualified_name.clone(),
                });
            }
        }
        if self.keys.contains_key(&key) {
            return Err(GraphError::DuplicateId(key));
        }
        let id = EdgeId(self.edges.len() as u32);
        self.keys.insert(key.clone(), ElementRef::Edge(id));
        self.edges.push(Edge {
            key,
            class,
            from,
            to,
            values: BTreeMap::new(),
        });
        self.outgoing[from.index()].push(id);
        Ok(id)
    }

    fn stored(&self, element: ElementRef) -> &BTreeMap<String, Value> {
        match element {
            ElementRef::Vertex(v) => &self.vertex(v).values,
            ElementRef::Edge(e) => &self.edge(e).values,
        }
    }

    /// Last written value, else the declared default, else undefined.
    pub fn get_attribute(&self, element: ElementRef, name: &str) -> Result<Value, GraphError> {
        let class = self.class_of(element);
        let def =
            self.schema
                .attribute(class, name)
                .ok_or_else(|| GraphError::UnknownAttribute {
                    class: self.schema.class_name(class).to_string(),
                    attribute: name.to_string(),
                })?;
        if let Some(v) = self.stored(element).get(name) {
            return Ok(v.clone());
        }
        Ok(def.default.clone().unwrap_or(Value::Undefined))
    }

    /// Writes an attribute; `Value::Undefined` is accepted for any domain.
    pub fn set_attribute(
        &mut self,
        element: ElementRef,
        name: &str,
        value: Value,
    ) -> Result<(), GraphError> {
        let class = self.class_of(element);
        let def =
            self.schema
                .attribute(class, name)
                .ok_or_else(|| GraphError::UnknownAttribute {
                    class: self.schema.class_name(class).to_string(),
                    attribute: name.to_string(),
                })?;
        if !value.is_undefined() && value.domain() != Some(def.domain) {
            return Err(GraphError::DomainMismatch {
                attribute: name.to_string(),
                expected: def.domain,
                found: value.kind(),
            });
        }
        let values = match element {
            ElementRef::Vertex(v) => &mut self.vertices[v.index()].values,
            ElementRef::Edge(e) => &mut self.edges[e.index()].values,
        };
        values.insert(name.to_string(), value);
        Ok(())
    }

    /// All visible attributes of an element with their current values, sorted by name.
    pub fn attribute_values(&self, element: ElementRef) -> BTreeMap<String, Value> {
        self.schema
            .visible_attributes(self.class_of(element))
            .into_iter()
            .map(|(_, def)| {
                let v = self
                    .stored(element)
                    .get(&def.name)
                    .cloned()
                    .or_else(|| def.default.clone())
                    .unwrap_or(Value::Undefined);
                (def.name.clone(), v)
            })
            .collect()
    }

    pub fn render_value(&self, value: &Value) -> String {
        value.render_with(
            &|v| {
                if self.contains_vertex(v) {
                    self.vertex(v).key.clone()
                } else {
                    format!("#v{}", v.0)
                }
            },
            &|e| {
                if e.index() < self.edges.len() {
                    self.edge(e).key.clone()
                } else {
                    format!("#e{}", e.0)
                }
            },
        )
    }

    /// Checks every graph invariant except multiplicities; first violation wins.
    pub fn validate(&self) -> Result<(), ValidationError> {
        match self.violations().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    pub fn violations(&self) -> Vec<ValidationError> {
        let mut out = Vec::new();
        let mut seen: HashMap<&str, ElementRef> = HashMap::new();
        let elements = self
            .vertex_ids()
            .map(ElementRef::Vertex)
            .chain(self.edge_ids().map(ElementRef::Edge));
        for el in elements {
            let key = self.key_of(el);
            if seen.insert(key, el).is_some() || self.keys.get(key) != Some(&el) {
                out.push(ValidationError::new(
                    Rule::UniqueIds,
                    key,
                    "identifier used twice",
                ));
            }
            let class = self.class_of(el);
            if self.schema.is_abstract(class) {
                out.push(ValidationError::new(
                    Rule::ConcreteType,
                    key,
                    format!("type `{}` is abstract", self.schema.class_name(class)),
                ));
            }
            for (name, value) in self.stored(el) {
                match self.schema.attribute(class, name) {
                    None => out.push(ValidationError::new(
                        Rule::AttributeVisibility,
                        key,
                        format!(
                            "attribute `{name}` is not visible on `{}`",
                            self.schema.class_name(class)
                        ),
                    )),
                    Some(def) => {
                        if !value.is_undefined() && value.domain() != Some(def.domain) {
                            out.push(ValidationError::new(
                                Rule::AttributeDomain,
                                key,
                                format!(
                                    "attribute `{name}` expects {}, holds {}",
                                    def.domain,
                                    value.kind()
                                ),
                            ));
                        }
                    }
                }
            }
            if let ElementRef::Edge(e) = el {
                let edge = self.edge(e);
                let ec = self.schema.edge_class(edge.class);
                for (end, v, expected) in [("from", edge.from, ec.from), ("to", edge.to, ec.to)] {
                    if !self.contains_vertex(v) {
                        out.push(ValidationError::new(
                            Rule::EndpointConformance,
                            key,
                            format!("{end} endpoint is not a vertex of this graph"),
                        ));
                    } else if !self.schema.vertex_conforms(self.vertex(v).class, expected) {
                        out.push(ValidationError::new(
                            Rule::EndpointConformance,
                            key,
                            format!(
                                "{end} endpoint `{}` does not conform to `{}`",
                                self.vertex(v).key,
                                self.schema.vertex_class(expected).qualified_name
                            ),
                        ));
                    }
                }
            }
        }
        out
    }

    /// Multiplicity violations; these are not enforced while mutating.
    pub fn multiplicity_violations(&self) -> Vec<ValidationError> {
        let mut out = Vec::new();
        for (ec_id, ec) in self.schema.edge_classes() {
            let edges = self.edges_of(ec_id);
            for v in self.vertices_of(ec.from) {
                let n = edges.iter().filter(|e| self.edge(**e).from == v).count();
                if !ec.to_multiplicity.admits(n) {
                    out.push(ValidationError::new(
                        Rule::Multiplicity,
                        &self.vertex(v).key,
                        format!(
                            "{n} outgoing `{}` edges, expected {}",
                            ec.qualified_name, ec.to_multiplicity
                        ),
                    ));
                }
            }
            for v in self.vertices_of(ec.to) {
                let n = edges.iter().filter(|e| self.edge(**e).to == v).count();
                if !ec.from_multiplicity.admits(n) {
                    out.push(ValidationError::new(
                        Rule::Multiplicity,
                        &self.vertex(v).key,
                        format!(
                            "{n} incoming `{}` edges, expected {}",
                            ec.qualified_name, ec.from_multiplicity
                        ),
                    ));
                }
            }
        }
        out
    }

    /// Content hash over schema and instances, stable within a build.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.schema.name().hash(&mut h);
        for p in self.schema.packages() {
            p.hash(&mut h);
        }
        for (_, vc) in self.schema.vertex_classes() {
            vc.qualified_name.hash(&mut h);
            vc.is_abstract.hash(&mut h);
            vc.superclasses.hash(&mut h);
            hash_attrs(&vc.attributes, &mut h);
        }
        for (_, ec) in self.schema.edge_classes() {
            ec.qualified_name.hash(&mut h);
            ec.is_abstract.hash(&mut h);
            ec.superclasses.hash(&mut h);
            hash_attrs(&ec.attributes, &mut h);
            (ec.from, ec.to, &ec.from_role, &ec.to_role, ec.kind).hash(&mut h);
            (ec.from_multiplicity, ec.to_multiplicity).hash(&mut h);
        }
        for v in &self.vertices {
            (&v.key, v.class, &v.values).hash(&mut h);
        }
        for e in &self.edges {
            (&e.key, e.class, e.from, e.to, &e.values).hash(&mut h);
        }
        h.finish()
    }
}

fn hash_attrs(attrs: &[super::schema::AttributeDef], h: &mut DefaultHasher) {
    for a in attrs {
        (&a.name, a.domain, &a.default).hash(h);
    }
}
