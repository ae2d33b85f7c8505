//! Type level of a graph: vertex and edge classes, attributes and inheritance.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use super::error::GraphError;
use crate::value::{Domain, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexClassId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeClassId(pub u32);

/// Either kind of class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassRef {
    Vertex(VertexClassId),
    Edge(EdgeClassId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeDef {
    pub name: String,
    pub domain: Domain,
    pub default: Option<Value>,
}

/// `(min, max)` bounds on how many edges may meet a vertex at one end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Multiplicity {
    pub min: u32,
    /// `None` is unbounded.
    pub max: Option<u32>,
}

impl Multiplicity {
    pub const ANY: Multiplicity = Multiplicity { min: 0, max: None };

    pub fn new(min: u32, max: Option<u32>) -> Self {
        Multiplicity { min, max }
    }

    pub fn admits(&self, count: usize) -> bool {
        count >= self.min as usize && self.max.is_none_or(|m| count <= m as usize)
    }

    /// Parses `min..max`, where max may be `*`.
    pub fn parse(text: &str) -> Option<Multiplicity> {
        let (lo, hi) = text.split_once("..")?;
        let min = lo.trim().parse().ok()?;
        let max = match hi.trim() {
            "*" => None,
            n => Some(n.parse().ok()?),
        };
        if max.is_some_and(|m| m < min) {
            return None;
        }
        Some(Multiplicity { min, max })
    }
}

impl Default for Multiplicity {
    fn default() -> Self {
        Multiplicity::ANY
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.max {
            Some(m) => write!(f, "{}..{}", self.min, m),
            None => write!(f, "{}..*", self.min),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Plain,
    /// Whole at the from-end, part at the to-end.
    Containment,
}

impl EdgeKind {
    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::Plain => "plain",
            EdgeKind::Containment => "containment",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClass {
    pub qualified_name: String,
    pub is_abstract: bool,
    pub superclasses: Vec<VertexClassId>,
    pub attributes: Vec<AttributeDef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClass {
    pub qualified_name: String,
    pub is_abstract: bool,
    pub superclasses: Vec<EdgeClassId>,
    pub attributes: Vec<AttributeDef>,
    pub from: VertexClassId,
    pub to: VertexClassId,
    pub from_role: Option<String>,
    pub to_role: Option<String>,
    pub from_multiplicity: Multiplicity,
    pub to_multiplicity: Multiplicity,
    pub kind: EdgeKind,
}

/// Arguments for [`Schema::add_edge_class`].
#[derive(Debug, Clone)]
pub struct EdgeClassSpec {
    pub name: String,
    pub is_abstract: bool,
    pub from: VertexClassId,
    pub to: VertexClassId,
    pub from_role: Option<String>,
    pub to_role: Option<String>,
    pub kind: EdgeKind,
    pub from_multiplicity: Option<Multiplicity>,
    pub to_multiplicity: Option<Multiplicity>,
}

impl EdgeClassSpec {
    pub fn new(name: impl Into<String>, from: VertexClassId, to: VertexClassId) -> Self {
        EdgeClassSpec {
            name: name.into(),
            is_abstract: false,
            from,
            to,
            from_role: None,
            to_role: None,
            kind: EdgeKind::Plain,
            from_multiplicity: None,
            to_multiplicity: None,
        }
    }

    pub fn roles(mut self, from_role: Option<&str>, to_role: Option<&str>) -> Self {
        self.from_role = from_role.filter(|r| !r.is_empty()).map(str::to_string);
        self.to_role = to_role.filter(|r| !r.is_empty()).map(str::to_string);
        self
    }

    pub fn kind(mut self, kind: EdgeKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn multiplicities(mut self, from: Multiplicity, to: Multiplicity) -> Self {
        self.from_multiplicity = Some(from);
        self.to_multiplicity = Some(to);
        self
    }

    pub fn abstract_class(mut self, is_abstract: bool) -> Self {
        self.is_abstract = is_abstract;
        self
    }
}

/// Splits `a.b.C` into (`a.b`, `C`); names without a dot live in the default package `""`.
pub fn split_qualified(name: &str) -> (&str, &str) {
    match name.rfind('.') {
        Some(i) => (&name[..i], &name[i + 1..]),
        None => ("", name),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schema {
    name: String,
    packages: BTreeSet<String>,
    vertex_classes: Vec<VertexClass>,
    edge_classes: Vec<EdgeClass>,
    by_name: HashMap<String, ClassRef>,
}

impl Schema {
    pub fn new(name: impl Into<String>) -> Self {
        Schema {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Declared packages, excluding the default package.
    pub fn packages(&self) -> impl Iterator<Item = &str> {
        self.packages.iter().map(String::as_str)
    }

    pub fn has_package(&self, package: &str) -> bool {
        self.packages.contains(package)
    }

    pub fn add_package(&mut self, package: &str) {
        if package.is_empty() {
            return;
        }
        // Registering `a.b` registers `a` too.
        let mut prefix = String::new();
        for part in package.split('.') {
            if !prefix.is_empty() {
                prefix.push('.');
            }
            prefix.push_str(part);
            self.packages.insert(prefix.clone());
        }
    }

    pub fn vertex_classes(&self) -> impl Iterator<Item = (VertexClassId, &VertexClass)> {
        self.vertex_classes
            .iter()
            .enumerate()
            .map(|(i, c)| (VertexClassId(i as u32), c))
    }

    pub fn edge_classes(&self) -> impl Iterator<Item = (EdgeClassId, &EdgeClass)> {
        self.edge_classes
            .iter()
            .enumerate()
            .map(|(i, c)| (EdgeClassId(i as u32), c))
    }

    pub fn vertex_class(&self, id: VertexClassId) -> &VertexClass {
        &self.vertex_classes[id.0 as usize]
    }

    pub fn edge_class(&self, id: EdgeClassId) -> &EdgeClass {
        &self.edge_classes[id.0 as usize]
    }

    pub fn lookup(&self, qualified_name: &str) -> Option<ClassRef> {
        self.by_name.get(qualified_name).copied()
    }

    pub fn vertex_class_id(&self, qualified_name: &str) -> Option<VertexClassId> {
        match self.lookup(qualified_name)? {
            ClassRef::Vertex(id) => Some(id),
            ClassRef::Edge(_) => None,
        }
    }

    pub fn edge_class_id(&self, qualified_name: &str) -> Option<EdgeClassId> {
        match self.lookup(qualified_name)? {
            ClassRef::Edge(id) => Some(id),
            ClassRef::Vertex(_) => None,
        }
    }

    pub fn class_name(&self, class: ClassRef) -> &str {
        match class {
            ClassRef::Vertex(id) => &self.vertex_class(id).qualified_name,
            ClassRef::Edge(id) => &self.edge_class(id).qualified_name,
        }
    }

    pub fn is_abstract(&self, class: ClassRef) -> bool {
        match class {
            ClassRef::Vertex(id) => self.vertex_class(id).is_abstract,
            ClassRef::Edge(id) => self.edge_class(id).is_abstract,
        }
    }

    fn declared_attributes(&self, class: ClassRef) -> &[AttributeDef] {
        match class {
            ClassRef::Vertex(id) => &self.vertex_class(id).attributes,
            ClassRef::Edge(id) => &self.edge_class(id).attributes,
        }
    }

    fn direct_supers(&self, class: ClassRef) -> Vec<ClassRef> {
        match class {
            ClassRef::Vertex(id) => self
                .vertex_class(id)
                .superclasses
                .iter()
                .map(|s| ClassRef::Vertex(*s))
                .collect(),
            ClassRef::Edge(id) => self
                .edge_class(id)
                .superclasses
                .iter()
                .map(|s| ClassRef::Edge(*s))
                .collect(),
        }
    }

    /// The class itself followed by all transitive superclasses, each once.
    pub fn ancestors(&self, class: ClassRef) -> Vec<ClassRef> {
        let mut seen = vec![class];
        let mut queue = VecDeque::from([class]);
        while let Some(c) = queue.pop_front() {
            for s in self.direct_supers(c) {
                if !seen.contains(&s) {
                    seen.push(s);
                    queue.push_back(s);
                }
            }
        }
        seen
    }

    /// Reflexive, transitive specialization test.
    pub fn conforms(&self, sub: ClassRef, sup: ClassRef) -> bool {
        sub == sup || self.ancestors(sub).contains(&sup)
    }

    pub fn vertex_conforms(&self, sub: VertexClassId, sup: VertexClassId) -> bool {
        self.conforms(ClassRef::Vertex(sub), ClassRef::Vertex(sup))
    }

    /// `mask[i]` is true iff vertex class `i` conforms to `sup`.
    pub fn vertex_conformance_mask(&self, sup: VertexClassId) -> Vec<bool> {
        (0..self.vertex_classes.len())
            .map(|i| self.vertex_conforms(VertexClassId(i as u32), sup))
            .collect()
    }

    /// All classes of the same kind conforming to `class`, including itself.
    fn descendants(&self, class: ClassRef) -> Vec<ClassRef> {
        let all: Vec<ClassRef> = match class {
            ClassRef::Vertex(_) => (0..self.vertex_classes.len())
                .map(|i| ClassRef::Vertex(VertexClassId(i as u32)))
                .collect(),
            ClassRef::Edge(_) => (0..self.edge_classes.len())
                .map(|i| ClassRef::Edge(EdgeClassId(i as u32)))
                .collect(),
        };
        all.into_iter()
            .filter(|c| self.conforms(*c, class))
            .collect()
    }

    /// Attributes visible on `class` paired with their declaring class.
    /// Diamond inheritance of one declaration yields a single entry.
    pub fn visible_attributes(&self, class: ClassRef) -> Vec<(ClassRef, &AttributeDef)> {
        let mut out = Vec::new();
        for c in self.ancestors(class) {
            for a in self.declared_attributes(c) {
                out.push((c, a));
            }
        }
        out
    }

    pub fn attribute(&self, class: ClassRef, name: &str) -> Option<&AttributeDef> {
        self.visible_attributes(class)
            .into_iter()
            .find(|(_, a)| a.name == name)
            .map(|(_, a)| a)
    }

    fn claim_name(&mut self, qualified_name: &str) -> Result<(), GraphError> {
        if qualified_name.is_empty() || self.by_name.contains_key(qualified_name) {
            return Err(GraphError::DuplicateClassName(qualified_name.to_string()));
        }
        let (package, _) = split_qualified(qualified_name);
        self.add_package(package);
        Ok(())
    }

    pub fn add_vertex_class(
        &mut self,
        qualified_name: &str,
        is_abstract: bool,
    ) -> Result<VertexClassId, GraphError> {
        self.claim_name(qualified_name)?;
        let id = VertexClassId(self.vertex_classes.len() as u32);
        self.vertex_classes.push(VertexClass {
            qualified_name: qualified_name.to_string(),
            is_abstract,
            superclasses: Vec::new(),
            attributes: Vec::new(),
        });
        self.by_name
            .insert(qualified_name.to_string(), ClassRef::Vertex(id));
        Ok(id)
    }

    pub fn add_edge_class(&mut self, spec: EdgeClassSpec) -> Result<EdgeClassId, GraphError> {
        for end in [spec.from, spec.to] {
            if end.0 as usize >= self.vertex_classes.len() {
                return Err(GraphError::UnknownClass(format!("#{}", end.0)));
            }
        }
        if spec.name.is_empty() || self.by_name.contains_key(&spec.name) {
            return Err(GraphError::DuplicateClassName(spec.name));
        }
        self.check_role(&spec.name, spec.to_role.as_deref(), spec.from, true)?;
        self.check_role(&spec.name, spec.from_role.as_deref(), spec.to, false)?;
        self.claim_name(&spec.name)?;
        let id = EdgeClassId(self.edge_classes.len() as u32);
        self.edge_classes.push(EdgeClass {
            qualified_name: spec.name.clone(),
            is_abstract: spec.is_abstract,
            superclasses: Vec::new(),
            attributes: Vec::new(),
            from: spec.from,
            to: spec.to,
            from_role: spec.from_role,
            to_role: spec.to_role,
            from_multiplicity: spec.from_multiplicity.unwrap_or_default(),
            to_multiplicity: spec.to_multiplicity.unwrap_or_default(),
            kind: spec.kind,
        });
        self.by_name.insert(spec.name, ClassRef::Edge(id));
        Ok(id)
    }

    /// A role seen from vertex class `anchor` must not already be used, in the
    /// same direction, by an edge class anchored at a related vertex class.
    fn check_role(
        &self,
        new_class: &str,
        role: Option<&str>,
        anchor: VertexClassId,
        outgoing: bool,
    ) -> Result<(), GraphError> {
        let Some(role) = role else { return Ok(()) };
        for existing in &self.edge_classes {
            let (other_role, other_anchor) = if outgoing {
                (existing.to_role.as_deref(), existing.from)
            } else {
                (existing.from_role.as_deref(), existing.to)
            };
            if other_role != Some(role) {
                continue;
            }
            if self.vertex_conforms(anchor, other_anchor)
                || self.vertex_conforms(other_anchor, anchor)
            {
                return Err(GraphError::AmbiguousRole {
                    role: role.to_string(),
                    class: new_class.to_string(),
                    existing: existing.qualified_name.clone(),
                    end: if outgoing { "to" } else { "from" },
                });
            }
        }
        Ok(())
    }

    pub fn add_specialization(&mut self, sub: ClassRef, sup: ClassRef) -> Result<(), GraphError> {
        let sub_name = self.class_name(sub).to_string();
        let sup_name = self.class_name(sup).to_string();
        match (sub, sup) {
            (ClassRef::Vertex(_), ClassRef::Vertex(_)) | (ClassRef::Edge(_), ClassRef::Edge(_)) => {
            }
            _ => {
                return Err(GraphError::KindMismatch {
                    sub: sub_name,
                    sup: sup_name,
                })
            }
        }
        if self.conforms(sup, sub) {
            return Err(GraphError::InheritanceCycle {
                sub: sub_name,
                sup: sup_name,
            });
        }
        if self.direct_supers(sub).contains(&sup) {
            return Ok(());
        }
        self.push_super(sub, sup);
        if let Err(e) = self.check_attribute_clashes(sub) {
            self.pop_super(sub);
            return Err(e);
        }
        Ok(())
    }

    pub fn add_specialization_by_name(&mut self, sub: &str, sup: &str) -> Result<(), GraphError> {
        let sub = self
            .lookup(sub)
            .ok_or_else(|| GraphError::UnknownClass(sub.to_string()))?;
        let sup = self
            .lookup(sup)
            .ok_or_else(|| GraphError::UnknownClass(sup.to_string()))?;
        self.add_specialization(sub, sup)
    }

    fn push_super(&mut self, sub: ClassRef, sup: ClassRef) {
        match (sub, sup) {
            (ClassRef::Vertex(a), ClassRef::Vertex(b)) => {
                self.vertex_classes[a.0 as usize].superclasses.push(b)
            }
            (ClassRef::Edge(a), ClassRef::Edge(b)) => {
                self.edge_classes[a.0 as usize].superclasses.push(b)
            }
            _ => unreachable!("kinds checked by caller"),
        }
    }

    fn pop_super(&mut self, sub: ClassRef) {
        match sub {
            ClassRef::Vertex(a) => {
                self.vertex_classes[a.0 as usize].superclasses.pop();
            }
            ClassRef::Edge(a) => {
                self.edge_classes[a.0 as usize].superclasses.pop();
            }
        }
    }

    fn check_attribute_clashes(&self, root: ClassRef) -> Result<(), GraphError> {
        for class in self.descendants(root) {
            let visible = self.visible_attributes(class);
            for (i, (decl_a, a)) in visible.iter().enumerate() {
                if let Some((_, b)) = visible[i + 1..]
                    .iter()
                    .find(|(decl_b, b)| b.name == a.name && decl_b != decl_a)
                {
                    return Err(GraphError::AttributeClash {
                        class: self.class_name(class).to_string(),
                        attribute: b.name.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn add_attribute(
        &mut self,
        class: ClassRef,
        name: &str,
        domain: Domain,
        default: Option<Value>,
    ) -> Result<(), GraphError> {
        for c in self.descendants(class) {
            if self.attribute(c, name).is_some() {
                return Err(GraphError::DuplicateAttribute {
                    class: self.class_name(c).to_string(),
                    attribute: name.to_string(),
                });
            }
        }
        if let Some(d) = &default {
            if d.domain() != Some(domain) {
                return Err(GraphError::DomainMismatch {
                    attribute: name.to_string(),
                    expected: domain,
                    found: d.kind(),
                });
            }
        }
        let def = AttributeDef {
            name: name.to_string(),
            domain,
            default,
        };
        match class {
            ClassRef::Vertex(id) => self.vertex_classes[id.0 as usize].attributes.push(def),
            ClassRef::Edge(id) => self.edge_classes[id.0 as usize].attributes.push(def),
        }
        Ok(())
    }

    pub fn add_attribute_by_name(
        &mut self,
        class: &str,
        name: &str,
        domain: Domain,
        default: Option<Value>,
    ) -> Result<(), GraphError> {
        let c = self
            .lookup(class)
            .ok_or_else(|| GraphError::UnknownClass(class.to_string()))?;
        self.add_attribute(c, name, domain, default)
    }

    /// Classes whose simple name is `simple`, keyed by package.
    pub fn classes_named(&self, simple: &str) -> Vec<(String, ClassRef)> {
        let mut out: Vec<(String, ClassRef)> = self
            .by_name
            .iter()
            .filter(|(q, _)| split_qualified(q).1 == simple)
            .map(|(q, c)| (split_qualified(q).0.to_string(), *c))
            .collect();
        out.sort();
        out
    }
}
