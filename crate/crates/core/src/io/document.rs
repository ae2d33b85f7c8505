use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::graph::{
    AttributeDef, ClassRef, EdgeClassSpec, EdgeKind, ElementRef, Graph, GraphError, Multiplicity,
    Rule, Schema, ValidationError,
};
use crate::value::{Domain, Value};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub schema: SchemaDoc,
    #[serde(default)]
    pub graph: InstanceDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemaDoc {
    pub name: String,
    #[serde(default)]
    pub packages: Vec<String>,
    #[serde(default)]
    pub vertex_classes: Vec<VertexClassDoc>,
    #[serde(default)]
    pub edge_classes: Vec<EdgeClassDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeDoc {
    pub name: String,
    pub domain: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexClassDoc {
    pub name: String,
    #[serde(default, rename = "abstract")]
    pub is_abstract: bool,
    #[serde(default)]
    pub superclasses: Vec<String>,
    #[serde(default)]
    pub attributes: Vec<AttributeDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeClassDoc {
    pub name: String,
    #[serde(default, rename = "abstract")]
    pub is_abstract: bool,
    #[serde(default)]
    pub superclasses: Vec<String>,
    pub from: String,
    pub to: String,
    #[serde(default)]
    pub from_role: Option<String>,
    #[serde(default)]
    pub to_role: Option<String>,
    /// `plain` or `containment`.
    #[serde(default = "plain")]
    pub kind: String,
    #[serde(default = "any_multiplicity")]
    pub from_multiplicity: String,
    #[serde(default = "any_multiplicity")]
    pub to_multiplicity: String,
    #[serde(default)]
    pub attributes: Vec<AttributeDoc>,
}

fn plain() -> String {
    "plain".into()
}

fn any_multiplicity() -> String {
    "0..*".into()
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    #[serde(default)]
    pub vertices: Vec<VertexDoc>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    pub class: String,
    #[serde(default)]
    pub attributes: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub class: String,
    pub from: String,
    pub to: String,
    #[serde(default)]
    pub attributes: BTreeMap<String, serde_json::Value>,
}

fn to_json(v: &Value) -> serde_json::Value {
    match v {
        Value::String(s) => serde_json::Value::String(s.clone()),
        Value::Integer(i) => (*i).into(),
        Value::Boolean(b) => (*b).into(),
        _ => serde_json::Value::Null,
    }
}

fn from_json(json: &serde_json::Value, domain: Domain) -> Option<Value> {
    match (json, domain) {
        (serde_json::Value::Null, _) => Some(Value::Undefined),
        (serde_json::Value::String(s), Domain::String) => Some(Value::String(s.clone())),
        (serde_json::Value::Bool(b), Domain::Boolean) => Some(Value::Boolean(*b)),
        (serde_json::Value::Number(n), Domain::Integer) => n.as_i64().map(Value::Integer),
        _ => None,
    }
}

fn json_kind(json: &serde_json::Value) -> &'static str {
    match json {
        serde_json::Value::Null => "Undefined",
        serde_json::Value::Bool(_) => "Boolean",
        serde_json::Value::Number(_) => "Number",
        serde_json::Value::String(_) => "String",
        serde_json::Value::Array(_) => "Array",
        serde_json::Value::Object(_) => "Object",
    }
}

impl GraphDocument {
    pub fn from_graph(graph: &Graph) -> Self {
        let schema = graph.schema();
        let attrs = |defs: &[AttributeDef]| {
            defs.iter()
                .map(|d| AttributeDoc {
                    name: d.name.clone(),
                    domain: d.domain.name().to_string(),
                    default: d.default.as_ref().map(to_json),
                })
                .collect()
        };
        let vertex_classes = schema
            .vertex_classes()
            .map(|(_, c)| VertexClassDoc {
                name: c.qualified_name.clone(),
                is_abstract: c.is_abstract,
                superclasses: c
                    .superclasses
                    .iter()
                    .map(|s| schema.vertex_class(*s).qualified_name.clone())
                    .collect(),
                attributes: attrs(&c.attributes),
            })
            .collect();
        let edge_classes = schema
            .edge_classes()
            .map(|(_, c)| EdgeClassDoc {
                name: c.qualified_name.clone(),
                is_abstract: c.is_abstract,
                superclasses: c
                    .superclasses
                    .iter()
                    .map(|s| schema.edge_class(*s).qualified_name.clone())
                    .collect(),
                from: schema.vertex_class(c.from).qualified_name.clone(),
                to: schema.vertex_class(c.to).qualified_name.clone(),
                from_role: c.from_role.clone(),
                to_role: c.to_role.clone(),
                kind: c.kind.name().to_string(),
                from_multiplicity: c.from_multiplicity.to_string(),
                to_multiplicity: c.to_multiplicity.to_string(),
                attributes: attrs(&c.attributes),
            })
            .collect();
        let stored = |values: &BTreeMap<String, Value>| {
            values
                .iter()
                .map(|(k, v)| (k.clone(), to_json(v)))
                .collect()
        };
        let vertices = graph
            .vertex_ids()
            .map(|v| {
                let vx = graph.vertex(v);
                VertexDoc {
                    id: vx.key.clone(),
                    class: schema.vertex_class(vx.class).qualified_name.clone(),
                    attributes: stored(vx.stored_values()),
                }
            })
            .collect();
        let edges = graph
            .edge_ids()
            .map(|e| {
                let ex = graph.edge(e);
                EdgeDoc {
                    id: ex.key.clone(),
                    class: schema.edge_class(ex.class).qualified_name.clone(),
                    from: graph.vertex(ex.from).key.clone(),
                    to: graph.vertex(ex.to).key.clone(),
                    attributes: stored(ex.stored_values()),
                }
            })
            .collect();
        GraphDocument {
            schema: SchemaDoc {
                name: schema.name().to_string(),
                packages: schema.packages().map(str::to_string).collect(),
                vertex_classes,
                edge_classes,
            },
            graph: InstanceDoc { vertices, edges },
        }
    }

    pub fn to_graph(&self) -> Result<Graph, IoError> {
        let schema = build_schema(&self.schema)?;
        let mut g = Graph::new(schema);
        for v in &self.graph.vertices {
            let class = match g.schema().lookup(&v.class) {
                Some(ClassRef::Vertex(c)) => c,
                _ => {
                    return Err(ValidationError::new(
                        Rule::Reference,
                        &v.id,
                        format!("unknown vertex class `{}`", v.class),
                    )
                    .into())
                }
            };
            let id = g
                .create_vertex_with_key(class, &v.id)
                .map_err(|e| instance_error(&v.id, e))?;
            set_attributes(&mut g, ElementRef::Vertex(id), &v.id, &v.attributes)?;
        }
        for e in &self.graph.edges {
            let class = match g.schema().lookup(&e.class) {
                Some(ClassRef::Edge(c)) => c,
                _ => {
                    return Err(ValidationError::new(
                        Rule::Reference,
                        &e.id,
                        format!("unknown edge class `{}`", e.class),
                    )
                    .into())
                }
            };
            let endpoint = |key: &str| match g.find(key) {
                Some(ElementRef::Vertex(v)) => Ok(v),
                _ => Err(ValidationError::new(
                    Rule::Reference,
                    &e.id,
                    format!("endpoint `{key}` is not a vertex"),
                )),
            };
            let (from, to) = (endpoint(&e.from)?, endpoint(&e.to)?);
            let id = g
                .create_edge_with_key(class, from, to, &e.id)
                .map_err(|err| instance_error(&e.id, err))?;
            set_attributes(&mut g, ElementRef::Edge(id), &e.id, &e.attributes)?;
        }
        g.validate()?;
        if let Some(v) = g.multiplicity_violations().into_iter().next() {
            return Err(v.into());
        }
        Ok(g)
    }
}

fn instance_error(id: &str, e: GraphError) -> IoError {
    let rule = match e {
        GraphError::DuplicateId(_) => Rule::UniqueIds,
        GraphError::AbstractInstantiation(_) => Rule::ConcreteType,
        GraphError::TypeNonConformance { .. } => Rule::EndpointConformance,
        GraphError::UnknownAttribute { .. } => Rule::AttributeVisibility,
        GraphError::DomainMismatch { .. } => Rule::AttributeDomain,
        _ => Rule::Reference,
    };
    ValidationError::new(rule, id, e.to_string()).into()
}

fn set_attributes(
    g: &mut Graph,
    element: ElementRef,
    id: &str,
    values: &BTreeMap<String, serde_json::Value>,
) -> Result<(), IoError> {
    for (name, json) in values {
        let class = g.class_of(element);
        let Some(def) = g.schema().attribute(class, name) else {
            return Err(ValidationError::new(
                Rule::AttributeVisibility,
                id,
                format!(
                    "attribute `{name}` is not visible on `{}`",
                    g.schema().class_name(class)
                ),
            )
            .into());
        };
        let domain = def.domain;
        let value = from_json(json, domain).ok_or_else(|| {
            ValidationError::new(
                Rule::AttributeDomain,
                id,
                format!(
                    "attribute `{name}` expects {domain}, holds {}",
                    json_kind(json)
                ),
            )
        })?;
        g.set_attribute(element, name, value)
            .map_err(|e| instance_error(id, e))?;
    }
    Ok(())
}

fn attribute_def(owner: &str, a: &AttributeDoc) -> Result<(Domain, Option<Value>), IoError> {
    let domain = Domain::parse(&a.domain).ok_or_else(|| IoError::Parse {
        line: 0,
        column: 0,
        message: format!("{owner}.{}: unknown domain `{}`", a.name, a.domain),
    })?;
    let default = match &a.default {
        None => None,
        Some(json) => Some(from_json(json, domain).ok_or(GraphError::DomainMismatch {
            attribute: a.name.clone(),
            expected: domain,
            found: json_kind(json),
        })?),
    };
    Ok((domain, default))
}

fn build_schema(doc: &SchemaDoc) -> Result<Schema, IoError> {
    let mut s = Schema::new(doc.name.clone());
    for p in &doc.packages {
        s.add_package(p);
    }
    for c in &doc.vertex_classes {
        s.add_vertex_class(&c.name, c.is_abstract)?;
    }
    let vertex_class = |s: &Schema, name: &str| {
        s.vertex_class_id(name)
            .ok_or_else(|| GraphError::UnknownClass(name.to_string()))
    };
    for c in &doc.edge_classes {
        let multiplicity = |text: &str| {
            Multiplicity::parse(text).ok_or_else(|| IoError::Parse {
                line: 0,
                column: 0,
                message: format!("{}: bad multiplicity `{text}`", c.name),
            })
        };
        let kind = match c.kind.as_str() {
            "plain" => EdgeKind::Plain,
            "containment" => EdgeKind::Containment,
            other => {
                return Err(IoError::Parse {
                    line: 0,
                    column: 0,
                    message: format!("{}: unknown edge kind `{other}`", c.name),
                })
            }
        };
        let spec = EdgeClassSpec::new(
            &c.name,
            vertex_class(&s, &c.from)?,
            vertex_class(&s, &c.to)?,
        )
        .roles(c.from_role.as_deref(), c.to_role.as_deref())
        .kind(kind)
        .multiplicities(
            multiplicity(&c.from_multiplicity)?,
            multiplicity(&c.to_multiplicity)?,
        )
        .abstract_class(c.is_abstract);
        s.add_edge_class(spec)?;
    }
    let supers = doc
        .vertex_classes
        .iter()
        .map(|c| (&c.name, &c.superclasses))
        .chain(doc.edge_classes.iter().map(|c| (&c.name, &c.superclasses)));
    for (name, sups) in supers {
        for sup in sups {
            s.add_specialization_by_name(name, sup)?;
        }
    }
    let attributes = doc
        .vertex_classes
        .iter()
        .map(|c| (&c.name, &c.attributes))
        .chain(doc.edge_classes.iter().map(|c| (&c.name, &c.attributes)));
    for (name, attrs) in attributes {
        for a in attrs {
            let (domain, default) = attribute_def(name, a)?;
            s.add_attribute_by_name(name, &a.name, domain, default)?;
        }
    }
    Ok(s)
}

/// Parses and validates a document. Nothing is returned unless the whole
/// graph conforms to its schema.
pub fn graph_from_str(text: &str) -> Result<Graph, IoError> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(|e| IoError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.to_graph()
}

/// Pretty JSON with all object keys sorted, newline-terminated.
pub fn graph_to_string(graph: &Graph) -> String {
    let value = serde_json::to_value(GraphDocument::from_graph(graph)).expect("document is JSON");
    let mut text = serde_json::to_string_pretty(&value).expect("document is JSON");
    text.push('\n');
    text
}
