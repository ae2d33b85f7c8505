use std::fmt;

use thiserror::Error;

use crate::value::Domain;

/// Errors raised by schema and instance mutations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("class name `{0}` is already in use")]
    DuplicateClassName(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("role `{role}` at the {end} end of `{class}` collides with edge class `{existing}`")]
    AmbiguousRole {
        role: String,
        class: String,
        existing: String,
        end: &'static str,
    },
    #[error("making `{sub}` a subclass of `{sup}` creates an inheritance cycle")]
    InheritanceCycle { sub: String, sup: String },
    #[error("class `{class}` would see attribute `{attribute}` from two declarations")]
    AttributeClash { class: String, attribute: String },
    #[error("`{sub}` and `{sup}` are not both vertex classes or both edge classes")]
    KindMismatch { sub: String, sup: String },
    #[error("attribute `{attribute}` already exists on `{class}` or one of its subclasses")]
    DuplicateAttribute { class: String, attribute: String },
    #[error("cannot instantiate abstract class `{0}`")]
    AbstractInstantiation(String),
    #[error("{end} of `{edge_class}` must conform to `{expected}`, found `{found}`")]
    TypeNonConformance {
        edge_class: String,
        end: &'static str,
        expected: String,
        found: String,
    },
    #[error("edge endpoint `{0}` is not a vertex of this graph")]
    DanglingEndpoint(String),
    #[error("attribute `{attribute}` is not visible on `{class}`")]
    UnknownAttribute { class: String, attribute: String },
    #[error("attribute `{attribute}` has domain {expected}, got {found}")]
    DomainMismatch {
        attribute: String,
        expected: Domain,
        found: &'static str,
    },
    #[error("element id `{0}` is already in use")]
    DuplicateId(String),
}

impl GraphError {
    /// Stable name of the error kind, used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            GraphError::DuplicateClassName(_) => "DuplicateClassName",
            GraphError::UnknownClass(_) => "UnknownClass",
            GraphError::AmbiguousRole { .. } => "AmbiguousRole",
            GraphError::InheritanceCycle { .. } => "InheritanceCycle",
            GraphError::AttributeClash { .. } => "AttributeClash",
            GraphError::KindMismatch { .. } => "KindMismatch",
            GraphError::DuplicateAttribute { .. } => "DuplicateAttribute",
            GraphError::AbstractInstantiation(_) => "AbstractInstantiation",
            GraphError::TypeNonConformance { .. } => "TypeNonConformance",
            GraphError::DanglingEndpoint(_) => "DanglingEndpoint",
            GraphError::UnknownAttribute { .. } => "UnknownAttribute",
            GraphError::DomainMismatch { .. } => "DomainMismatch",
            GraphError::DuplicateId(_) => "DuplicateId",
        }
    }
}

/// The graph invariant a [`ValidationError`] reports on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Every element type is a non-abstract class of the schema.
    ConcreteType,
    /// Edge endpoints are vertices of the graph conforming to the edge class ends.
    EndpointConformance,
    /// Elements only carry values for attributes visible on their type.
    AttributeVisibility,
    /// Attribute values match the declared domain.
    AttributeDomain,
    /// Element identifiers are unique.
    UniqueIds,
    /// Edge counts per vertex respect the declared multiplicities.
    Multiplicity,
    /// Every referenced class or element is defined.
    Reference,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::ConcreteType => "concrete-type",
            Rule::EndpointConformance => "endpoint-conformance",
            Rule::AttributeVisibility => "attribute-visibility",
            Rule::AttributeDomain => "attribute-domain",
            Rule::UniqueIds => "unique-ids",
            Rule::Multiplicity => "multiplicity",
            Rule::Reference => "reference",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A violated graph invariant, naming the offending element.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rule {rule} violated by `{element}`: {message}")]
pub struct ValidationError {
    pub rule: Rule,
    pub element: String,
    pub message: String,
}

impl ValidationError {
    pub fn new(rule: Rule, element: impl Into<String>, message: impl Into<String>) -> Self {
        ValidationError {
            rule,
            element: element.into(),
            message: message.into(),
        }
    }
}
