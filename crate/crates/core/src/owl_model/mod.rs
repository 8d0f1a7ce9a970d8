//! OWL entity model (TBox plus optional ABox) with Turtle and RDF/XML writers.

mod rdfxml;
mod turtle;

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::datatypes::Builtin;
use crate::xml_doc::{is_name_char, is_name_start_char, is_ncname};

pub use rdfxml::serialize_rdfxml;
pub use turtle::serialize_turtle;

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD_HASH_NS: &str = "http://www.w3.org/2001/XMLSchema#";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri {
    /// Absolute IRI without the fragment separator.
    pub base: String,
    pub fragment: String,
}

impl Iri {
    pub fn new(base: impl Into<String>, fragment: impl Into<String>) -> Self {
        Iri {
            base: base.into(),
            fragment: fragment.into(),
        }
    }

    pub fn full(&self) -> String {
        format!("{}#{}", self.base, self.fragment)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.base, self.fragment)
    }
}

/// Maps an arbitrary name to an NCName: invalid characters become `_`, and a
/// leading `_` is added when the first character cannot start a name.
pub fn sanitize_fragment(name: &str) -> String {
    let mut out: String = name
        .chars()
        .map(|c| if c != ':' && is_name_char(c) { c } else { '_' })
        .collect();
    match out.chars().next() {
        None => out.push('_'),
        Some(c) if !is_name_start_char(c) => out.insert(0, '_'),
        _ => {}
    }
    debug_assert!(is_ncname(&out));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainExpr {
    Class(Iri),
    /// `owl:unionOf` class expression.
    Union(Vec<Iri>),
    /// Several `rdfs:domain` axioms, read as an intersection.
    AllOf(Vec<Iri>),
}

impl DomainExpr {
    pub fn members(&self) -> &[Iri] {
        match self {
            DomainExpr::Class(c) => std::slice::from_ref(c),
            DomainExpr::Union(v) | DomainExpr::AllOf(v) => v,
        }
    }

    pub fn contains(&self, class: &Iri) -> bool {
        self.members().contains(class)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DataRange {
    Datatype(Builtin),
    /// `rdfs:Literal`.
    Literal,
}

impl DataRange {
    pub fn iri(self) -> String {
        match self {
            DataRange::Datatype(b) => b.iri(),
            DataRange::Literal => format!("{}Literal", RDFS_NS),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CardinalityKind {
    Min,
    Max,
    Exact,
}

impl CardinalityKind {
    pub fn owl_local_name(self) -> &'static str {
        match self {
            CardinalityKind::Min => "minCardinality",
            CardinalityKind::Max => "maxCardinality",
            CardinalityKind::Exact => "cardinality",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardinalityRestriction {
    pub property: Iri,
    pub kind: CardinalityKind,
    pub value: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwlClass {
    pub iri: Iri,
    pub label: String,
    pub subclass_of: Vec<Iri>,
    pub restrictions: Vec<CardinalityRestriction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectProperty {
    pub iri: Iri,
    pub label: String,
    pub domain: DomainExpr,
    pub range: Iri,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatatypeProperty {
    pub iri: Iri,
    pub label: String,
    pub domain: DomainExpr,
    pub range: DataRange,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataAssertion {
    pub property: Iri,
    pub value: String,
    pub datatype: Builtin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub iri: Iri,
    pub class: Iri,
    pub object_assertions: Vec<(Iri, Iri)>,
    pub data_assertions: Vec<DataAssertion>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OntologyModel {
    pub ontology_iri: String,
    /// Namespace bound to the empty prefix; entity IRIs normally live here.
    pub namespace: String,
    pub imports: Vec<String>,
    pub classes: Vec<OwlClass>,
    pub object_properties: Vec<ObjectProperty>,
    pub datatype_properties: Vec<DatatypeProperty>,
    pub individuals: Vec<Individual>,
    /// Names changed by sanitization or collision suffixes during generation.
    pub naming_notes: Vec<String>,
}

impl OntologyModel {
    pub fn new(ontology_iri: &str) -> Self {
        OntologyModel {
            ontology_iri: ontology_iri.to_string(),
            namespace: ontology_iri.to_string(),
            ..OntologyModel::default()
        }
    }

    pub fn iri(&self, fragment: &str) -> Iri {
        Iri::new(self.namespace.clone(), fragment)
    }

    pub fn class(&self, fragment: &str) -> Option<&OwlClass> {
        self.classes.iter().find(|c| c.iri.fragment == fragment)
    }

    pub fn object_property(&self, fragment: &str) -> Option<&ObjectProperty> {
        self.object_properties.iter().find(|p| p.iri.fragment == fragment)
    }

    pub fn datatype_property(&self, fragment: &str) -> Option<&DatatypeProperty> {
        self.datatype_properties.iter().find(|p| p.iri.fragment == fragment)
    }

    pub fn individual(&self, fragment: &str) -> Option<&Individual> {
        self.individuals.iter().find(|i| i.iri.fragment == fragment)
    }

    /// Classes, properties and individuals.
    pub fn entity_count(&self) -> usize {
        self.classes.len() + self.object_properties.len() + self.datatype_properties.len() + self.individuals.len()
    }
}

/// Constructs outside the comfortable OWL-DL fragment.
pub fn check_dl_profile(o: &OntologyModel) -> Vec<String> {
    let mut warnings = Vec::new();
    for p in &o.datatype_properties {
        if p.range == DataRange::Datatype(Builtin::AnyType) {
            warnings.push(format!(
                "datatype property `{}` ranges over xsd:anyType, which is not an OWL 2 DL datatype",
                p.iri.fragment
            ));
        }
    }
    let domains = o
        .object_properties
        .iter()
        .map(|p| (&p.iri, &p.domain))
        .chain(o.datatype_properties.iter().map(|p| (&p.iri, &p.domain)));
    for (iri, d) in domains {
        if let DomainExpr::AllOf(m) = d {
            if m.len() > 1 {
                warnings.push(format!(
                    "property `{}` has {} domain axioms; their intersection may be empty",
                    iri.fragment,
                    m.len()
                ));
            }
        }
    }
    warnings.extend(o.naming_notes.iter().cloned());
    warnings
}

/// Structural invariants of a model. `imported` supplies entities the model
/// may reference without declaring (a TBox imported by a split ABox).
pub fn check_invariants(o: &OntologyModel, imported: Option<&OntologyModel>) -> Result<(), Vec<String>> {
    let mut errors = Vec::new();
    let sources: Vec<&OntologyModel> = std::iter::once(o).chain(imported).collect();
    let classes: HashSet<&Iri> = sources.iter().flat_map(|m| m.classes.iter().map(|c| &c.iri)).collect();
    let object_props: HashMap<&Iri, &ObjectProperty> = sources
        .iter()
        .flat_map(|m| m.object_properties.iter().map(|p| (&p.iri, p)))
        .collect();
    let data_props: HashMap<&Iri, &DatatypeProperty> = sources
        .iter()
        .flat_map(|m| m.datatype_properties.iter().map(|p| (&p.iri, p)))
        .collect();
    let individuals: HashSet<&Iri> = o.individuals.iter().map(|i| &i.iri).collect();
    let parents: HashMap<&Iri, &[Iri]> = sources
        .iter()
        .flat_map(|m| m.classes.iter().map(|c| (&c.iri, c.subclass_of.as_slice())))
        .collect();
    // A subject is in a domain when its class or any superclass is a member.
    let in_domain = |d: &DomainExpr, class: &Iri| {
        let mut stack = vec![class];
        let mut seen = HashSet::new();
        while let Some(c) = stack.pop() {
            if d.contains(c) {
                return true;
            }
            if seen.insert(c) {
                stack.extend(parents.get(c).copied().unwrap_or_default());
            }
        }
        false
    };

    let mut check_unique = |what: &str, iris: Vec<&Iri>| {
        let mut seen = HashSet::new();
        for i in iris {
            if !is_ncname(&i.fragment) {
                errors.push(format!("{} fragment `{}` is not an NCName", what, i.fragment));
            }
            if !seen.insert(i) {
                errors.push(format!("duplicate {} `{}`", what, i));
            }
        }
    };
    check_unique("class", o.classes.iter().map(|c| &c.iri).collect());
    check_unique("object property", o.object_properties.iter().map(|p| &p.iri).collect());
    check_unique("datatype property", o.datatype_properties.iter().map(|p| &p.iri).collect());
    check_unique("individual", o.individuals.iter().map(|i| &i.iri).collect());

    let need_class = |what: String, iri: &Iri, errors: &mut Vec<String>| {
        if !classes.contains(iri) {
            errors.push(format!("{} refers to undeclared class `{}`", what, iri));
        }
    };
    for c in &o.classes {
        for s in &c.subclass_of {
            need_class(format!("class `{}`", c.iri.fragment), s, &mut errors);
        }
        for r in &c.restrictions {
            if !object_props.contains_key(&r.property) && !data_props.contains_key(&r.property) {
                errors.push(format!("restriction on `{}` names an undeclared property", c.iri.fragment));
            }
        }
    }
    for p in &o.object_properties {
        for d in p.domain.members() {
            need_class(format!("domain of `{}`", p.iri.fragment), d, &mut errors);
        }
        need_class(format!("range of `{}`", p.iri.fragment), &p.range, &mut errors);
    }
    for p in &o.datatype_properties {
        for d in p.domain.members() {
            need_class(format!("domain of `{}`", p.iri.fragment), d, &mut errors);
        }
    }
    for i in &o.individuals {
        need_class(format!("individual `{}`", i.iri.fragment), &i.class, &mut errors);
        for (p, target) in &i.object_assertions {
            match object_props.get(p) {
                None => errors.push(format!("individual `{}` uses undeclared object property `{}`", i.iri.fragment, p)),
                Some(op) if !in_domain(&op.domain, &i.class) => errors.push(format!(
                    "individual `{}` of class `{}` is outside the domain of `{}`",
                    i.iri.fragment, i.class.fragment, p.fragment
                )),
                _ => {}
            }
            if !individuals.contains(target) {
                errors.push(format!("individual `{}` links to unknown individual `{}`", i.iri.fragment, target));
            }
        }
        for a in &i.data_assertions {
            match data_props.get(&a.property) {
                None => errors.push(format!(
                    "individual `{}` uses undeclared datatype property `{}`",
                    i.iri.fragment, a.property
                )),
                Some(dp) if !in_domain(&dp.domain, &i.class) => errors.push(format!(
                    "individual `{}` of class `{}` is outside the domain of `{}`",
                    i.iri.fragment, i.class.fragment, a.property.fragment
                )),
                _ => {}
            }
            if !a.datatype.accepts(&a.value) {
                errors.push(format!(
                    "value {:?} of `{}` on `{}` is not a valid {}",
                    a.value, a.property.fragment, i.iri.fragment, a.datatype
                ));
            }
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

/// Entities sorted by fragment, as both writers emit them.
pub(crate) fn sorted<T>(items: &[T], iri: impl Fn(&T) -> &Iri) -> Vec<&T> {
    let mut v: Vec<&T> = items.iter().collect();
    v.sort_by(|a, b| iri(a).fragment.cmp(&iri(b).fragment).then_with(|| iri(a).base.cmp(&iri(b).base)));
    v
}
