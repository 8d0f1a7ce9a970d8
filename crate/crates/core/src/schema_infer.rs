//! Schema inference from instance documents.
//!
//! Every distinct element name gets one global declaration (salami-slice
//! style). Occurrence facets are binary: `minOccurs` 0|1 and `maxOccurs`
//! 1|unbounded, tracked per child name. Only `xs:sequence` is inferred;
//! child order is the first-occurrence order refined by the precedence
//! observed across instances. These rules are a reconstruction of what a
//! Trang-style inferrer does, not a reimplementation of Trang.

use std::collections::{BTreeSet, HashMap};

use indexmap::IndexMap;
use thiserror::Error;

use crate::datatypes::{is_decimal, is_integer, Builtin};
use crate::xml_doc::{is_ncname, text_content, XmlDocument, XmlElement};
use crate::xsd_model::{
    AttrDecl, ComplexType, ElementDecl, MaxOccurs, Occurs, Particle, ParticleTerm, SchemaModel, SimpleRef,
    TypeRef,
};

/// Inferable simple types. `String` is the top; integer < decimal; the
/// remaining pairs are incomparable and join to `String`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LatticeType {
    Boolean,
    Integer,
    Decimal,
    NCName,
    String,
}

impl LatticeType {
    pub const ALL: [LatticeType; 5] = [
        LatticeType::Boolean,
        LatticeType::Integer,
        LatticeType::Decimal,
        LatticeType::NCName,
        LatticeType::String,
    ];

    pub fn join(self, other: LatticeType) -> LatticeType {
        use LatticeType::*;
        match (self, other) {
            (a, b) if a == b => a,
            (Integer, Decimal) | (Decimal, Integer) => Decimal,
            _ => String,
        }
    }

    /// Partial order of the lattice.
    pub fn le(self, other: LatticeType) -> bool {
        self.join(other) == other
    }

    pub fn builtin(self) -> Builtin {
        match self {
            LatticeType::Boolean => Builtin::Boolean,
            LatticeType::Integer => Builtin::Integer,
            LatticeType::Decimal => Builtin::Decimal,
            LatticeType::NCName => Builtin::NCName,
            LatticeType::String => Builtin::String,
        }
    }
}

/// Most specific lattice type whose lexical rule accepts `value`.
///
/// Booleans are only the literals `true` and `false`; `0` and `1` stay integers.
pub fn infer_datatype(value: &str) -> LatticeType {
    if value == "true" || value == "false" {
        LatticeType::Boolean
    } else if is_integer(value) {
        LatticeType::Integer
    } else if is_decimal(value) {
        LatticeType::Decimal
    } else if is_ncname(value) {
        LatticeType::NCName
    } else {
        LatticeType::String
    }
}

pub fn join_datatype(a: LatticeType, b: LatticeType) -> LatticeType {
    a.join(b)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferError {
    #[error("no input documents")]
    NoDocuments,
    #[error("{source_id}: root element `{found}` differs from `{expected}` of the first document")]
    RootMismatch {
        expected: String,
        found: String,
        source_id: String,
    },
    #[error("{source_id}:{}:{}: element `{element}` has element children elsewhere but is a text-only leaf here", position.0, position.1)]
    InferenceConflict {
        element: String,
        source_id: String,
        position: (usize, usize),
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InferOptions {
    /// Merge an element seen both as a text leaf and with element children
    /// into one mixed profile (with a warning) instead of failing.
    pub merge_conflicts: bool,
}

impl Default for InferOptions {
    fn default() -> Self {
        InferOptions { merge_conflicts: true }
    }
}

/// Facts accumulated for one element name over all its instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementProfile {
    pub name: String,
    pub child_order: Vec<String>,
    /// 0 or 1.
    pub child_min: IndexMap<String, u32>,
    /// `Bounded(1)` or `Unbounded`.
    pub child_max: IndexMap<String, MaxOccurs>,
    pub attr_required: IndexMap<String, bool>,
    pub attr_type: IndexMap<String, LatticeType>,
    pub text_type: Option<LatticeType>,
    pub has_element_children: bool,
    pub has_text: bool,
    instances: usize,
    empty_instances: usize,
    first_leaf: Option<(String, (usize, usize))>,
    first_with_children: Option<(String, (usize, usize))>,
    /// Children in first-occurrence order, before precedence refinement.
    seen_order: Vec<String>,
    /// Observed "run of a, then run of b" adjacencies between child names.
    precedence: BTreeSet<(usize, usize)>,
}

impl ElementProfile {
    fn new(name: &str) -> Self {
        ElementProfile {
            name: name.to_string(),
            child_order: Vec::new(),
            child_min: IndexMap::new(),
            child_max: IndexMap::new(),
            attr_required: IndexMap::new(),
            attr_type: IndexMap::new(),
            text_type: None,
            has_element_children: false,
            has_text: false,
            instances: 0,
            empty_instances: 0,
            first_leaf: None,
            first_with_children: None,
            seen_order: Vec::new(),
            precedence: BTreeSet::new(),
        }
    }

    pub fn instances(&self) -> usize {
        self.instances
    }

    /// Declared as a simple-typed global element rather than a complex type.
    pub fn is_text_leaf(&self) -> bool {
        self.has_text && !self.has_element_children && self.attr_type.is_empty()
    }

    fn observe(&mut self, e: &XmlElement, source_id: &str) {
        self.instances += 1;
        let first_instance = self.instances == 1;

        let mut counts: IndexMap<&str, u32> = IndexMap::new();
        let mut runs: Vec<&str> = Vec::new();
        for c in e.child_elements() {
            let n = c.name.local.as_str();
            *counts.entry(n).or_insert(0) += 1;
            if runs.last() != Some(&n) {
                runs.push(n);
            }
        }
        for name in self.seen_order.clone() {
            if !counts.contains_key(name.as_str()) {
                self.child_min.insert(name, 0);
            }
        }
        for (&name, &count) in &counts {
            if !self.child_min.contains_key(name) {
                self.seen_order.push(name.to_string());
                self.child_min.insert(name.to_string(), if first_instance { 1 } else { 0 });
                self.child_max.insert(name.to_string(), MaxOccurs::Bounded(1));
            }
            if count >= 2 {
                self.child_max.insert(name.to_string(), MaxOccurs::Unbounded);
            }
        }
        let index: HashMap<&str, usize> = self
            .seen_order
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        for pair in runs.windows(2) {
            self.precedence.insert((index[pair[0]], index[pair[1]]));
        }

        let present: Vec<&str> = e
            .attributes
            .iter()
            .filter(|(n, _)| !n.is_namespace_decl())
            .map(|(n, _)| n.local.as_str())
            .collect();
        for (name, required) in self.attr_required.iter_mut() {
            if !present.contains(&name.as_str()) {
                *required = false;
            }
        }
        for (n, v) in &e.attributes {
            if n.is_namespace_decl() {
                continue;
            }
            let t = infer_datatype(v);
            match self.attr_type.get_mut(&n.local) {
                Some(prev) => *prev = prev.join(t),
                None => {
                    self.attr_type.insert(n.local.clone(), t);
                    self.attr_required.insert(n.local.clone(), first_instance);
                }
            }
        }

        let has_children = !counts.is_empty();
        let text = text_content(e);
        if !text.is_empty() {
            self.has_text = true;
            let t = infer_datatype(&text);
            self.text_type = Some(self.text_type.map_or(t, |p| p.join(t)));
            if !has_children && self.first_leaf.is_none() {
                self.first_leaf = Some((source_id.to_string(), e.position));
            }
        } else if !has_children {
            self.empty_instances += 1;
        }
        if has_children {
            self.has_element_children = true;
            if self.first_with_children.is_none() {
                self.first_with_children = Some((source_id.to_string(), e.position));
            }
        }
    }

    /// Resolves child order and the empty-instance rule. Returns warnings.
    fn finish(&mut self) -> Vec<String> {
        let mut warnings = Vec::new();
        match topological_order(self.seen_order.len(), &self.precedence) {
            Some(order) => {
                self.child_order = order.into_iter().map(|i| self.seen_order[i].clone()).collect();
            }
            None => {
                warnings.push(format!(
                    "element `{}`: children appear in conflicting orders; keeping first-seen order",
                    self.name
                ));
                self.child_order = self.seen_order.clone();
            }
        }
        // An empty instance of a text leaf contributes the empty string.
        if self.has_text && self.empty_instances > 0 {
            let empty = infer_datatype("");
            self.text_type = self.text_type.map(|t| t.join(empty));
        }
        warnings
    }
}

/// Kahn's algorithm, always taking the earliest-seen available name.
fn topological_order(n: usize, edges: &BTreeSet<(usize, usize)>) -> Option<Vec<usize>> {
    let mut indegree = vec![0usize; n];
    for &(a, b) in edges {
        if a != b {
            indegree[b] += 1;
        }
    }
    let mut done = vec![false; n];
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let next = (0..n).find(|&i| !done[i] && indegree[i] == 0)?;
        done[next] = true;
        out.push(next);
        for &(a, b) in edges.range((next, 0)..(next + 1, 0)) {
            if a != b {
                indegree[b] -= 1;
            }
        }
    }
    Some(out)
}

/// Profiles for every element name, in document order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileSet {
    pub root: String,
    pub profiles: IndexMap<String, ElementProfile>,
    pub warnings: Vec<String>,
}

pub fn accumulate_profiles(docs: &[XmlDocument], opts: InferOptions) -> Result<ProfileSet, InferError> {
    let first = docs.first().ok_or(InferError::NoDocuments)?;
    let root = first.root.name.local.clone();
    let mut profiles: IndexMap<String, ElementProfile> = IndexMap::new();
    for doc in docs {
        if doc.root.name.local != root {
            return Err(InferError::RootMismatch {
                expected: root,
                found: doc.root.name.local.clone(),
                source_id: doc.source_id.clone(),
            });
        }
        let mut stack = vec![&doc.root];
        while let Some(e) = stack.pop() {
            profiles
                .entry(e.name.local.clone())
                .or_insert_with(|| ElementProfile::new(&e.name.local))
                .observe(e, &doc.source_id);
            let children: Vec<&XmlElement> = e.child_elements().collect();
            stack.extend(children.into_iter().rev());
        }
    }
    let mut warnings = Vec::new();
    for p in profiles.values_mut() {
        if let (Some((src, pos)), Some(_)) = (&p.first_leaf, &p.first_with_children) {
            if !opts.merge_conflicts {
                return Err(InferError::InferenceConflict {
                    element: p.name.clone(),
                    source_id: src.clone(),
                    position: *pos,
                });
            }
            warnings.push(format!(
                "element `{}` is a text leaf in some places and has element children in others; declared with mixed content",
                p.name
            ));
        }
        warnings.extend(p.finish());
    }
    Ok(ProfileSet {
        root,
        profiles,
        warnings,
    })
}

pub fn profiles_to_schema(set: &ProfileSet, source_id: &str) -> SchemaModel {
    let mut model = SchemaModel {
        source_id: source_id.to_string(),
        ..SchemaModel::default()
    };
    for p in set.profiles.values() {
        let type_ref = if p.is_text_leaf() {
            TypeRef::Builtin(p.text_type.unwrap_or(LatticeType::String).builtin())
        } else {
            let particles = p
                .child_order
                .iter()
                .map(|c| Particle {
                    term: ParticleTerm::ElementRef(c.clone()),
                    occurs: Occurs::new(p.child_min[c], p.child_max[c]),
                })
                .collect();
            let attributes = p
                .attr_type
                .iter()
                .map(|(name, t)| AttrDecl {
                    name: name.clone(),
                    datatype: SimpleRef::Builtin(t.builtin()),
                    required: p.attr_required[name],
                })
                .collect();
            TypeRef::AnonymousComplex(Box::new(ComplexType {
                name: None,
                particles,
                attributes,
                attr_group_refs: Vec::new(),
                mixed: p.has_text,
                derivation: None,
            }))
        };
        model.elements.push(ElementDecl {
            name: p.name.clone(),
            type_ref,
            position: (0, 0),
        });
    }
    model
}

#[derive(Debug, Clone)]
pub struct Inference {
    pub schema: SchemaModel,
    pub profiles: ProfileSet,
    pub warnings: Vec<String>,
}

/// Accumulates profiles over `docs` and emits the schema.
pub fn infer_schema(docs: &[XmlDocument], source_id: &str, opts: InferOptions) -> Result<Inference, InferError> {
    let profiles = accumulate_profiles(docs, opts)?;
    let schema = profiles_to_schema(&profiles, source_id);
    Ok(Inference {
        warnings: profiles.warnings.clone(),
        schema,
        profiles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use crate::xml_doc::parse_xml;
    use crate::xsd_model::read_schema;
    use LatticeType::*;

    fn doc(s: &str) -> XmlDocument {
        parse_xml(s.as_bytes(), "doc").unwrap()
    }

    #[test]
    fn datatype_examples() {
        assert_eq!(infer_datatype("1977"), Integer);
        assert_eq!(infer_datatype("Godfrey"), NCName);
        assert_eq!(infer_datatype("Cornell University Press"), String);
        assert_eq!(infer_datatype("FHIW13C-1234"), NCName);
        assert_eq!(infer_datatype("true"), Boolean);
        assert_eq!(infer_datatype("1"), Integer);
        assert_eq!(infer_datatype("-2.5"), Decimal);
        assert_eq!(infer_datatype(""), String);
        assert_eq!(infer_datatype("a:b"), String);
    }

    #[test]
    fn join_examples() {
        assert_eq!(join_datatype(Integer, Integer), Integer);
        assert_eq!(join_datatype(Integer, NCName), String);
        assert_eq!(join_datatype(Integer, Decimal), Decimal);
        assert_eq!(join_datatype(Boolean, NCName), String);
    }

    #[test]
    fn join_is_a_semilattice_with_string_on_top() {
        for a in LatticeType::ALL {
            assert_eq!(a.join(String), String);
            assert_eq!(a.join(a), a);
            for b in LatticeType::ALL {
                assert_eq!(a.join(b), b.join(a));
                for c in LatticeType::ALL {
                    assert_eq!(a.join(b).join(c), a.join(b.join(c)));
                }
            }
        }
    }

    #[test]
    fn bibliography_entry_profile() {
        let set = accumulate_profiles(&[doc(samples::BIBLIOGRAPHY_XML)], InferOptions::default()).unwrap();
        let entry = &set.profiles["biblioentry"];
        assert_eq!(entry.child_order, ["author", "title", "publisher", "pubdate"]);
        assert_eq!(entry.child_max["author"], MaxOccurs::Unbounded);
        assert_eq!(entry.child_max["title"], MaxOccurs::Bounded(1));
        assert!(entry.attr_required["id"]);
        assert_eq!(entry.attr_type["id"], NCName);
        assert_eq!(set.profiles["author"].child_min["othername"], 0);
        assert_eq!(set.profiles["author"].child_min["surname"], 1);
        assert!(set.warnings.is_empty());
    }

    #[test]
    fn merges_two_documents() {
        let docs = [doc("<a><b>1</b></a>"), doc("<a><b>2</b><b>x</b></a>")];
        let set = accumulate_profiles(&docs, InferOptions::default()).unwrap();
        assert_eq!(set.profiles["a"].child_max["b"], MaxOccurs::Unbounded);
        assert_eq!(set.profiles["a"].child_min["b"], 1);
        assert_eq!(set.profiles["b"].text_type, Some(String));
    }

    #[test]
    fn root_mismatch() {
        let err = accumulate_profiles(&[doc("<a/>"), doc("<b/>")], InferOptions::default()).unwrap_err();
        assert!(matches!(err, InferError::RootMismatch { .. }));
        assert_eq!(accumulate_profiles(&[], InferOptions::default()).unwrap_err(), InferError::NoDocuments);
    }

    #[test]
    fn leaf_versus_container_conflict() {
        let d = doc("<r><x>text</x><y><x><z/></x></y></r>");
        let err = accumulate_profiles(std::slice::from_ref(&d), InferOptions { merge_conflicts: false }).unwrap_err();
        assert!(matches!(err, InferError::InferenceConflict { ref element, .. } if element == "x"));
        let set = accumulate_profiles(&[d], InferOptions::default()).unwrap();
        assert_eq!(set.warnings.len(), 1);
        let s = profiles_to_schema(&set, "s");
        let TypeRef::AnonymousComplex(ct) = &s.element("x").unwrap().type_ref else {
            panic!("complex type expected")
        };
        assert!(ct.mixed);
        assert_eq!(ct.particles[0].occurs.min, 0);
    }

    #[test]
    fn precedence_refines_first_seen_order() {
        // First-seen order would be [a, c, b]; the second instance puts b before c.
        let set = accumulate_profiles(&[doc("<r><p><a/><c/></p><p><b/><c/></p></r>")], InferOptions::default()).unwrap();
        assert_eq!(set.profiles["p"].child_order, ["a", "b", "c"]);
        assert!(set.warnings.is_empty());
    }

    #[test]
    fn order_conflict_warns_and_keeps_first_seen() {
        let set = accumulate_profiles(&[doc("<r><p><a/><b/></p><p><b/><a/></p></r>")], InferOptions::default()).unwrap();
        assert_eq!(set.profiles["p"].child_order, ["a", "b"]);
        assert_eq!(set.warnings.len(), 1);
        let set = accumulate_profiles(&[doc("<r><a/><b/><a/></r>")], InferOptions::default()).unwrap();
        assert_eq!(set.warnings.len(), 1);
    }

    #[test]
    fn bibliography_schema_matches_published_schema() {
        let inferred = infer_schema(&[doc(samples::BIBLIOGRAPHY_XML)], "bibliography.xsd", InferOptions::default())
            .unwrap()
            .schema;
        let published = read_schema(samples::BIBLIOGRAPHY_XSD.as_bytes(), "bibliography.xsd").unwrap();
        assert_eq!(inferred, published);
    }

    #[test]
    fn text_leaf_becomes_simple_global() {
        let s = infer_schema(&[doc("<a>hi</a>")], "s", InferOptions::default()).unwrap().schema;
        assert_eq!(s.elements.len(), 1);
        assert_eq!(s.elements[0].type_ref, TypeRef::Builtin(Builtin::NCName));
    }

    #[test]
    fn empty_element_is_empty_complex_type() {
        let s = infer_schema(&[doc("<a/>")], "s", InferOptions::default()).unwrap().schema;
        assert_eq!(s.elements[0].type_ref, TypeRef::AnonymousComplex(Box::default()));
    }

    #[test]
    fn mixed_profile() {
        let s = infer_schema(&[doc("<p>some <b>bold</b> text</p>")], "s", InferOptions::default())
            .unwrap()
            .schema;
        let TypeRef::AnonymousComplex(ct) = &s.element("p").unwrap().type_ref else {
            panic!("complex type expected")
        };
        assert!(ct.mixed);
        assert_eq!(ct.particles.len(), 1);
    }

    #[test]
    fn text_with_attributes_is_mixed_without_particles() {
        let s = infer_schema(&[doc("<price currency=\"EUR\">12.5</price>")], "s", InferOptions::default())
            .unwrap()
            .schema;
        let TypeRef::AnonymousComplex(ct) = &s.elements[0].type_ref else {
            panic!("complex type expected")
        };
        assert!(ct.mixed && ct.particles.is_empty());
        assert_eq!(ct.attributes[0].datatype, SimpleRef::Builtin(Builtin::NCName));
    }

    #[test]
    fn optional_attribute_and_empty_leaf_instances() {
        let s = infer_schema(&[doc("<r><e k=\"1\">5</e><e/><f k=\"x\"/><f/></r>")], "s", InferOptions::default())
            .unwrap()
            .schema;
        // `e` has an attribute, so it is complex; `k` is optional on `f`.
        let TypeRef::AnonymousComplex(f) = &s.element("f").unwrap().type_ref else {
            panic!()
        };
        assert!(!f.attributes[0].required);
        let s = infer_schema(&[doc("<r><n>5</n><n/></r>")], "s", InferOptions::default()).unwrap().schema;
        assert_eq!(s.element("n").unwrap().type_ref, TypeRef::Builtin(Builtin::String));
    }
}
