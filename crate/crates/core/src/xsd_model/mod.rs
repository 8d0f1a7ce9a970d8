//! XML Schema component model, reader, writer and structural validator.
//!
//! The supported subset is what the inference step emits plus the common
//! hand-written constructs: global and local elements, `ref=`, named and
//! anonymous complex types, `xs:sequence`, occurrence facets, attributes,
//! `xs:group`, `xs:attributeGroup`, simple types restricting a built-in,
//! `xs:complexContent` extension and restriction, and mixed content.

mod read;
mod validate;
mod write;

use std::fmt;

use thiserror::Error;

pub use crate::datatypes::Builtin;
pub use read::read_schema;
pub use validate::{validate, ValidationReport, Violation, ViolationKind};
pub use write::serialize_schema;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemaErrorKind {
    /// The bytes are not well-formed XML.
    Malformed,
    Unresolved,
    Duplicate,
    Unsupported,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}:{}: {message}", position.0, position.1)]
pub struct SchemaError {
    pub kind: SchemaErrorKind,
    pub position: (usize, usize),
    pub message: String,
}

impl SchemaError {
    pub fn with_kind(kind: SchemaErrorKind, position: (usize, usize), message: impl Into<String>) -> Self {
        SchemaError {
            kind,
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MaxOccurs {
    Bounded(u32),
    Unbounded,
}

impl MaxOccurs {
    pub fn allows(self, count: u32) -> bool {
        match self {
            MaxOccurs::Bounded(n) => count <= n,
            MaxOccurs::Unbounded => true,
        }
    }
}

impl fmt::Display for MaxOccurs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxOccurs::Bounded(n) => write!(f, "{}", n),
            MaxOccurs::Unbounded => f.write_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Occurs {
    pub min: u32,
    pub max: MaxOccurs,
}

impl Occurs {
    pub const ONCE: Occurs = Occurs {
        min: 1,
        max: MaxOccurs::Bounded(1),
    };

    pub fn new(min: u32, max: MaxOccurs) -> Self {
        Occurs { min, max }
    }

    /// Collapses to the binary facets used by the graph: min 0|1, max 1|unbounded.
    pub fn clamped(self) -> Occurs {
        Occurs {
            min: self.min.min(1),
            max: match self.max {
                MaxOccurs::Bounded(n) if n <= 1 => MaxOccurs::Bounded(1),
                _ => MaxOccurs::Unbounded,
            },
        }
    }
}

impl Default for Occurs {
    fn default() -> Self {
        Occurs::ONCE
    }
}

/// Type of an element declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeRef {
    Builtin(Builtin),
    /// A global complex or simple type, by name.
    Named(String),
    AnonymousComplex(Box<ComplexType>),
    AnonymousSimple(SimpleType),
}

/// Type of an attribute declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimpleRef {
    Builtin(Builtin),
    Named(String),
    Anonymous(SimpleType),
}

#[derive(Debug, Clone, Eq)]
pub struct ElementDecl {
    pub name: String,
    pub type_ref: TypeRef,
    /// Source position; not part of structural equality.
    pub position: (usize, usize),
}

impl PartialEq for ElementDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.type_ref == other.type_ref
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParticleTerm {
    /// A local element declaration.
    Element(ElementDecl),
    /// `ref=` to a global element.
    ElementRef(String),
    GroupRef(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Particle {
    pub term: ParticleTerm,
    pub occurs: Occurs,
}

impl Particle {
    /// Element name matched by this particle, or `None` for group references.
    pub fn element_name(&self) -> Option<&str> {
        match &self.term {
            ParticleTerm::Element(d) => Some(&d.name),
            ParticleTerm::ElementRef(n) => Some(n),
            ParticleTerm::GroupRef(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivationKind {
    Extension,
    Restriction,
}

impl DerivationKind {
    pub fn keyword(self) -> &'static str {
        match self {
            DerivationKind::Extension => "extension",
            DerivationKind::Restriction => "restriction",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub kind: DerivationKind,
    pub base: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttrDecl {
    pub name: String,
    pub datatype: SimpleRef,
    pub required: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ComplexType {
    /// Present iff the type is global.
    pub name: Option<String>,
    pub particles: Vec<Particle>,
    pub attributes: Vec<AttrDecl>,
    pub attr_group_refs: Vec<String>,
    pub mixed: bool,
    pub derivation: Option<Derivation>,
}

impl ComplexType {
    pub fn group_refs(&self) -> impl Iterator<Item = &str> {
        self.particles.iter().filter_map(|p| match &p.term {
            ParticleTerm::GroupRef(g) => Some(g.as_str()),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleType {
    /// `None` for an inline (anonymous) simple type.
    pub name: Option<String>,
    pub base: Builtin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GlobalType {
    Complex(ComplexType),
    Simple(SimpleType),
}

impl GlobalType {
    pub fn name(&self) -> &str {
        match self {
            GlobalType::Complex(c) => c.name.as_deref().unwrap_or(""),
            GlobalType::Simple(s) => s.name.as_deref().unwrap_or(""),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDecl {
    pub name: String,
    pub particles: Vec<Particle>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttrGroupDecl {
    pub name: String,
    pub attributes: Vec<AttrDecl>,
    pub attr_group_refs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SchemaModel {
    pub source_id: String,
    pub elements: Vec<ElementDecl>,
    pub types: Vec<GlobalType>,
    pub groups: Vec<GroupDecl>,
    pub attribute_groups: Vec<AttrGroupDecl>,
}

impl SchemaModel {
    pub fn element(&self, name: &str) -> Option<&ElementDecl> {
        self.elements.iter().find(|e| e.name == name)
    }

    pub fn global_type(&self, name: &str) -> Option<&GlobalType> {
        self.types.iter().find(|t| t.name() == name)
    }

    pub fn complex_type(&self, name: &str) -> Option<&ComplexType> {
        match self.global_type(name) {
            Some(GlobalType::Complex(c)) => Some(c),
            _ => None,
        }
    }

    pub fn simple_type(&self, name: &str) -> Option<&SimpleType> {
        match self.global_type(name) {
            Some(GlobalType::Simple(s)) => Some(s),
            _ => None,
        }
    }

    pub fn group(&self, name: &str) -> Option<&GroupDecl> {
        self.groups.iter().find(|g| g.name == name)
    }

    pub fn attribute_group(&self, name: &str) -> Option<&AttrGroupDecl> {
        self.attribute_groups.iter().find(|g| g.name == name)
    }

    /// Built-in type underlying a simple type reference, if it resolves.
    pub fn simple_base(&self, r: &SimpleRef) -> Option<Builtin> {
        match r {
            SimpleRef::Builtin(b) => Some(*b),
            SimpleRef::Anonymous(s) => Some(s.base),
            SimpleRef::Named(n) => self.simple_type(n).map(|s| s.base),
        }
    }

    /// Visits every complex type in the schema, global and anonymous.
    pub fn complex_types(&self) -> Vec<&ComplexType> {
        fn walk<'a>(particles: &'a [Particle], out: &mut Vec<&'a ComplexType>) {
            for p in particles {
                if let ParticleTerm::Element(d) = &p.term {
                    if let TypeRef::AnonymousComplex(c) = &d.type_ref {
                        out.push(c);
                        walk(&c.particles, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        for e in &self.elements {
            if let TypeRef::AnonymousComplex(c) = &e.type_ref {
                out.push(c.as_ref());
                walk(&c.particles, &mut out);
            }
        }
        for t in &self.types {
            if let GlobalType::Complex(c) = t {
                out.push(c);
                walk(&c.particles, &mut out);
            }
        }
        for g in &self.groups {
            walk(&g.particles, &mut out);
        }
        out
    }
}
