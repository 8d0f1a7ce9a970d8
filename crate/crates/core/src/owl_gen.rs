//! Schema-to-ontology mapping.
//!
//! Class rules: one class per complex type (named after the type, or after
//! the surrounding element when anonymous) and per element or attribute
//! group; derivations become `rdfs:subClassOf`. Property rules: members
//! whose type maps to a class give `has<Range>` object properties; simple
//! members give datatype properties named after the member; mixed types get
//! `hasTextContent`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use indexmap::IndexMap;

use crate::datatypes::Builtin;
use crate::owl_model::{
    sanitize_fragment, CardinalityKind, CardinalityRestriction, DataRange, DatatypeProperty, DomainExpr, Iri,
    ObjectProperty, OntologyModel, OwlClass,
};
use crate::xsd_model::{DerivationKind, MaxOccurs, Occurs, SchemaModel};
use crate::xsg::{EdgeKind, SchemaGraph, ValueType, VertexKind};

pub const TEXT_CONTENT_PROPERTY: &str = "hasTextContent";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenOptions {
    pub base_iri: String,
    pub emit_cardinality: bool,
    /// One property with an `owl:unionOf` domain per shared name. When off,
    /// each (domain, name) pair gets its own `<Domain>.<name>` property.
    pub union_domains: bool,
    /// Replace xsd:anyType ranges with rdfs:Literal.
    pub strict_dl: bool,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            base_iri: "http://example.org/onto".to_string(),
            emit_cardinality: false,
            union_domains: true,
            strict_dl: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    ClassGlobalType,
    ClassAnonType,
    ClassGroup,
    SubclassExt,
    SubclassRestr,
    ObjProp,
    DtpropElement,
    DtpropAttr,
    DtpropMixedText,
    DefinedSimpleAnytype,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::ClassGlobalType => "CLASS_GLOBAL_TYPE",
            Rule::ClassAnonType => "CLASS_ANON_TYPE",
            Rule::ClassGroup => "CLASS_GROUP",
            Rule::SubclassExt => "SUBCLASS_EXT",
            Rule::SubclassRestr => "SUBCLASS_RESTR",
            Rule::ObjProp => "OBJPROP",
            Rule::DtpropElement => "DTPROP_ELEMENT",
            Rule::DtpropAttr => "DTPROP_ATTR",
            Rule::DtpropMixedText => "DTPROP_MIXED_TEXT",
            Rule::DefinedSimpleAnytype => "DEFINED_SIMPLE_ANYTYPE",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntityKind {
    Class,
    ObjectProperty,
    DatatypeProperty,
    /// A subclass axiom; its IRI is the subclass.
    SubclassAxiom,
}

impl EntityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntityKind::Class => "class",
            EntityKind::ObjectProperty => "object-property",
            EntityKind::DatatypeProperty => "datatype-property",
            EntityKind::SubclassAxiom => "subclass-axiom",
        }
    }
}

/// Link from schema components to the ontology entity they produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bridge {
    pub paths: Vec<String>,
    pub kind: EntityKind,
    pub rule: Rule,
    pub iri: Iri,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MappingTrace {
    pub bridges: Vec<Bridge>,
}

impl MappingTrace {
    /// Bridge whose paths include `path`, restricted to property kinds.
    pub fn property_at(&self, path: &str) -> Option<&Bridge> {
        self.bridges.iter().find(|b| {
            matches!(b.kind, EntityKind::ObjectProperty | EntityKind::DatatypeProperty)
                && b.paths.iter().any(|p| p == path)
        })
    }

    pub fn class_at(&self, path: &str) -> Option<&Bridge> {
        self.bridges
            .iter()
            .find(|b| b.kind == EntityKind::Class && b.paths.iter().any(|p| p == path))
    }

    pub fn count(&self, kind: EntityKind) -> usize {
        self.bridges.iter().filter(|b| b.kind == kind).count()
    }
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub ontology: OntologyModel,
    pub trace: MappingTrace,
    pub warnings: Vec<String>,
}

/// Hands out unique NCName fragments across all TBox entities.
#[derive(Default)]
struct Names {
    used: HashSet<String>,
    notes: Vec<String>,
}

impl Names {
    fn alloc(&mut self, wanted: &str) -> String {
        let base = sanitize_fragment(wanted);
        if base != wanted {
            self.notes.push(format!("name `{}` sanitized to `{}`", wanted, base));
        }
        let mut candidate = base.clone();
        let mut n = 2;
        while self.used.contains(&candidate) {
            candidate = format!("{}_{}", base, n);
            n += 1;
        }
        if candidate != base {
            self.notes
                .push(format!("name `{}` already taken; using `{}`", base, candidate));
        }
        self.used.insert(candidate.clone());
        candidate
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum PropKind {
    Object,
    Data(DataRange),
}

/// One member of a class-source vertex that maps to a property.
struct Occurrence {
    container: usize,
    name: String,
    kind: PropKind,
    rule: Rule,
    path: String,
    /// Clamped element facets, for cardinality restrictions.
    occurs: Option<Occurs>,
    range_class: Option<usize>,
}

fn data_range(v: &ValueType, strict: bool) -> (DataRange, bool) {
    let (range, defined) = match v {
        ValueType::Builtin(b) => (*b, false),
        ValueType::Defined { .. } => (Builtin::AnyType, true),
    };
    let range = match range {
        Builtin::AnyType | Builtin::AnySimpleType if strict => DataRange::Literal,
        b => DataRange::Datatype(b),
    };
    (range, defined)
}

pub fn generate_tbox(schema: &SchemaModel, graph: &SchemaGraph, opts: &GenOptions) -> Generated {
    let mut o = OntologyModel::new(&opts.base_iri);
    let mut names = Names::default();
    let mut warnings = Vec::new();

    // Classes, in vertex order.
    let mut class_of: HashMap<usize, usize> = HashMap::new();
    let mut class_rule: HashMap<usize, Rule> = HashMap::new();
    for v in graph.vertices.iter().filter(|v| v.kind.is_class_source()) {
        let (wanted, rule) = match (v.kind, v.owner) {
            (VertexKind::ComplexType, Some(owner)) => (graph.vertex(owner).label.as_str(), Rule::ClassAnonType),
            (VertexKind::ComplexType, None) => (v.label.as_str(), Rule::ClassGlobalType),
            _ => (v.label.as_str(), Rule::ClassGroup),
        };
        let fragment = names.alloc(wanted);
        class_of.insert(v.id, o.classes.len());
        class_rule.insert(v.id, rule);
        o.classes.push(OwlClass {
            iri: o.iri(&fragment),
            label: wanted.to_string(),
            subclass_of: Vec::new(),
            restrictions: Vec::new(),
        });
    }
    if o.classes.is_empty() {
        warnings.push(format!("schema `{}` has no complex types or groups; no classes generated", schema.source_id));
    }
    let class_iri = |o: &OntologyModel, v: usize| o.classes[class_of[&v]].iri.clone();

    // Subclass axioms.
    let mut subclass_paths: HashMap<usize, (Rule, String, Iri)> = HashMap::new();
    for v in graph.vertices.iter().filter(|v| v.kind == VertexKind::ComplexType) {
        if let Some((kind, base)) = graph.base_of(v.id) {
            if let Some(&bc) = class_of.get(&base) {
                let base_iri = o.classes[bc].iri.clone();
                o.classes[class_of[&v.id]].subclass_of.push(base_iri);
                let rule = match kind {
                    DerivationKind::Extension => Rule::SubclassExt,
                    DerivationKind::Restriction => Rule::SubclassRestr,
                };
                let path = format!("{}/xs:complexContent/xs:{}", v.schema_path, kind.keyword());
                subclass_paths.insert(v.id, (rule, path, class_iri(&o, v.id)));
            }
        }
    }

    // Property occurrences, container by container.
    let mut occurrences: Vec<Occurrence> = Vec::new();
    for v in graph.vertices.iter().filter(|v| v.kind.is_class_source()) {
        for e in graph.outgoing(v.id).filter(|e| e.kind == EdgeKind::TypeToMember) {
            let target = graph.vertex(e.to);
            let occ = match target.kind {
                VertexKind::Element | VertexKind::Attribute => {
                    let ty = graph.type_of(target.id).filter(|t| class_of.contains_key(t));
                    match (ty, &target.value_type) {
                        (Some(t), _) => Occurrence {
                            container: v.id,
                            name: format!("has{}", o.classes[class_of[&t]].iri.fragment),
                            kind: PropKind::Object,
                            rule: Rule::ObjProp,
                            path: e.schema_path.clone(),
                            occurs: e.occurs.filter(|_| target.kind == VertexKind::Element),
                            range_class: Some(t),
                        },
                        (None, value) => {
                            let value = value.clone().unwrap_or(ValueType::Builtin(Builtin::AnyType));
                            let (range, defined) = data_range(&value, opts.strict_dl);
                            let rule = match (defined, target.kind) {
                                (true, _) => Rule::DefinedSimpleAnytype,
                                (false, VertexKind::Attribute) => Rule::DtpropAttr,
                                _ => Rule::DtpropElement,
                            };
                            Occurrence {
                                container: v.id,
                                name: target.label.clone(),
                                kind: PropKind::Data(range),
                                rule,
                                path: e.schema_path.clone(),
                                occurs: e.occurs.filter(|_| target.kind == VertexKind::Element),
                                range_class: None,
                            }
                        }
                    }
                }
                VertexKind::ElementGroup | VertexKind::AttributeGroup => Occurrence {
                    container: v.id,
                    name: format!("has{}", o.classes[class_of[&target.id]].iri.fragment),
                    kind: PropKind::Object,
                    rule: Rule::ObjProp,
                    path: e.schema_path.clone(),
                    occurs: None,
                    range_class: Some(target.id),
                },
                _ => continue,
            };
            occurrences.push(occ);
        }
        if v.mixed {
            occurrences.push(Occurrence {
                container: v.id,
                name: TEXT_CONTENT_PROPERTY.to_string(),
                kind: PropKind::Data(DataRange::Datatype(Builtin::String)),
                rule: Rule::DtpropMixedText,
                path: format!("{}/text()", v.schema_path),
                occurs: None,
                range_class: None,
            });
        }
    }

    // Group occurrences into properties. Key: (name, kind) in union mode
    // when the name has one kind overall, otherwise (name, kind, domain).
    let mut kinds_by_name: IndexMap<&str, Vec<PropKind>> = IndexMap::new();
    let mut domains_by_name: IndexMap<&str, Vec<usize>> = IndexMap::new();
    for oc in &occurrences {
        let k = kinds_by_name.entry(&oc.name).or_default();
        if !k.contains(&oc.kind) {
            k.push(oc.kind);
        }
        let d = domains_by_name.entry(&oc.name).or_default();
        if !d.contains(&oc.container) {
            d.push(oc.container);
        }
    }
    let mut split_warned = HashSet::new();
    let per_domain = |oc: &Occurrence| -> bool {
        let kinds = &kinds_by_name[oc.name.as_str()];
        let domains = &domains_by_name[oc.name.as_str()];
        domains.len() > 1 && (!opts.union_domains || kinds.len() > 1)
    };
    // key -> index into `props`
    let mut prop_index: IndexMap<(String, PropKind, Option<usize>), usize> = IndexMap::new();
    struct Prop {
        name: String,
        kind: PropKind,
        rule: Rule,
        domains: Vec<usize>,
        range_class: Option<usize>,
        paths: Vec<String>,
        first_container: usize,
        fragment: String,
    }
    let mut props: Vec<Prop> = Vec::new();
    let mut occurrence_prop: Vec<usize> = Vec::with_capacity(occurrences.len());
    for oc in &occurrences {
        let split = per_domain(oc);
        if split && kinds_by_name[oc.name.as_str()].len() > 1 && split_warned.insert(oc.name.clone()) {
            warnings.push(format!(
                "property name `{}` has different ranges in different types; one property per domain",
                oc.name
            ));
        }
        let key = (oc.name.clone(), oc.kind, split.then_some(oc.container));
        let idx = *prop_index.entry(key).or_insert_with(|| {
            props.push(Prop {
                name: oc.name.clone(),
                kind: oc.kind,
                rule: oc.rule,
                domains: Vec::new(),
                range_class: oc.range_class,
                paths: Vec::new(),
                first_container: oc.container,
                fragment: String::new(),
            });
            props.len() - 1
        });
        let p = &mut props[idx];
        if !p.domains.contains(&oc.container) {
            p.domains.push(oc.container);
        }
        if !p.paths.contains(&oc.path) {
            p.paths.push(oc.path.clone());
        }
        occurrence_prop.push(idx);
    }
    for i in 0..props.len() {
        let split = (props[i].domains.len() == 1)
            && prop_index
                .keys()
                .any(|(n, _, d)| *n == props[i].name && d.is_some());
        let wanted = if split {
            let domain = &o.classes[class_of[&props[i].domains[0]]].iri.fragment;
            format!("{}.{}", domain, props[i].name)
        } else {
            props[i].name.clone()
        };
        props[i].fragment = names.alloc(&wanted);
    }

    for p in &props {
        let iri = o.iri(&p.fragment);
        let members: Vec<Iri> = p.domains.iter().map(|&d| class_iri(&o, d)).collect();
        let domain = if members.len() == 1 {
            DomainExpr::Class(members[0].clone())
        } else {
            DomainExpr::Union(members)
        };
        match p.kind {
            PropKind::Object => o.object_properties.push(ObjectProperty {
                iri,
                label: p.name.clone(),
                domain,
                range: class_iri(&o, p.range_class.expect("object properties have a range class")),
            }),
            PropKind::Data(range) => o.datatype_properties.push(DatatypeProperty {
                iri,
                label: p.name.clone(),
                domain,
                range,
            }),
        }
    }

    if opts.emit_cardinality {
        for (oc, &pi) in occurrences.iter().zip(&occurrence_prop) {
            let Some(occ) = oc.occurs else { continue };
            let restriction = match (occ.min, occ.max) {
                (1, MaxOccurs::Bounded(1)) => Some((CardinalityKind::Exact, 1)),
                (1, MaxOccurs::Unbounded) => Some((CardinalityKind::Min, 1)),
                (0, MaxOccurs::Bounded(1)) => Some((CardinalityKind::Max, 1)),
                _ => None,
            };
            if let Some((kind, value)) = restriction {
                let r = CardinalityRestriction {
                    property: o.iri(&props[pi].fragment),
                    kind,
                    value,
                };
                let class = &mut o.classes[class_of[&oc.container]];
                if !class.restrictions.contains(&r) {
                    class.restrictions.push(r);
                }
            }
        }
    }

    // Trace in schema order: each class, its subclass axiom, then the
    // properties first seen in it.
    let mut trace = MappingTrace::default();
    for v in graph.vertices.iter().filter(|v| v.kind.is_class_source()) {
        trace.bridges.push(Bridge {
            paths: vec![v.schema_path.clone()],
            kind: EntityKind::Class,
            rule: class_rule[&v.id],
            iri: class_iri(&o, v.id),
        });
        if let Some((rule, path, iri)) = subclass_paths.remove(&v.id) {
            trace.bridges.push(Bridge {
                paths: vec![path],
                kind: EntityKind::SubclassAxiom,
                rule,
                iri,
            });
        }
        for p in props.iter().filter(|p| p.first_container == v.id) {
            trace.bridges.push(Bridge {
                paths: p.paths.clone(),
                kind: match p.kind {
                    PropKind::Object => EntityKind::ObjectProperty,
                    PropKind::Data(_) => EntityKind::DatatypeProperty,
                },
                rule: p.rule,
                iri: o.iri(&p.fragment),
            });
        }
    }

    o.naming_notes = names.notes;
    Generated {
        ontology: o,
        trace,
        warnings,
    }
}

/// One line per bridge: paths (joined by ` | `), kind, rule id, IRI.
pub fn write_trace(t: &MappingTrace) -> String {
    let mut out = String::new();
    for b in &t.bridges {
        out.push_str(&b.paths.join(" | "));
        out.push('\t');
        out.push_str(b.kind.as_str());
        out.push('\t');
        out.push_str(b.rule.id());
        out.push('\t');
        out.push_str(&b.iri.full());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::owl_model::check_dl_profile;
    use crate::samples;
    use crate::xsd_model::read_schema;
    use crate::xsg::build_xsg;

    fn gen(src: &str, opts: &GenOptions) -> Generated {
        let m = read_schema(src.as_bytes(), "t").unwrap();
        let g = build_xsg(&m).unwrap();
        generate_tbox(&m, &g, opts)
    }

    fn fragments<'a>(it: impl Iterator<Item = &'a Iri>) -> Vec<&'a str> {
        let mut v: Vec<&str> = it.map(|i| i.fragment.as_str()).collect();
        v.sort();
        v
    }

    #[test]
    fn bibliography_classes_and_object_properties() {
        let g = gen(samples::BIBLIOGRAPHY_XSD, &GenOptions::default());
        let o = &g.ontology;
        assert_eq!(
            fragments(o.classes.iter().map(|c| &c.iri)),
            ["author", "biblioentry", "bibliography", "publisher"]
        );
        let op = |n: &str| {
            let p = o.object_property(n).unwrap();
            (p.domain.members()[0].fragment.clone(), p.range.fragment.clone())
        };
        assert_eq!(o.object_properties.len(), 3);
        assert_eq!(op("hasbiblioentry"), ("bibliography".into(), "biblioentry".into()));
        assert_eq!(op("hasauthor"), ("biblioentry".into(), "author".into()));
        assert_eq!(op("haspublisher"), ("biblioentry".into(), "publisher".into()));
        assert!(g.warnings.is_empty());
        assert!(check_dl_profile(o).is_empty());
    }

    #[test]
    fn bibliography_datatype_properties() {
        let o = gen(samples::BIBLIOGRAPHY_XSD, &GenOptions::default()).ontology;
        let dp = |n: &str| {
            let p = o.datatype_property(n).unwrap();
            (fragments(p.domain.members().iter()), p.range)
        };
        use DataRange::Datatype as D;
        assert_eq!(o.datatype_properties.len(), 7);
        assert_eq!(dp("id"), (vec!["biblioentry", "bibliography"], D(Builtin::NCName)));
        assert!(matches!(o.datatype_property("id").unwrap().domain, DomainExpr::Union(_)));
        assert_eq!(dp("title"), (vec!["biblioentry"], D(Builtin::String)));
        assert_eq!(dp("pubdate"), (vec!["biblioentry"], D(Builtin::Integer)));
        for n in ["firstname", "surname", "othername"] {
            assert_eq!(dp(n), (vec!["author"], D(Builtin::NCName)));
        }
        assert_eq!(dp("publishername"), (vec!["publisher"], D(Builtin::String)));
    }

    #[test]
    fn literal_domains_split_shared_names() {
        let opts = GenOptions {
            union_domains: false,
            ..GenOptions::default()
        };
        let o = gen(samples::BIBLIOGRAPHY_XSD, &opts).ontology;
        assert_eq!(o.datatype_properties.len(), 8);
        assert!(o.datatype_property("id").is_none());
        assert!(o.datatype_property("bibliography.id").is_some());
        assert!(o.datatype_property("biblioentry.id").is_some());
    }

    #[test]
    fn trace_lines() {
        let g = gen(samples::BIBLIOGRAPHY_XSD, &GenOptions::default());
        let text = write_trace(&g.trace);
        assert_eq!(text.lines().count(), 14);
        assert!(text.contains(
            "/xs:schema/xs:element[author]/xs:complexType\tclass\tCLASS_ANON_TYPE\thttp://example.org/onto#author\n"
        ));
        assert!(text.contains("/xs:schema/xs:element[bibliography]/xs:complexType/xs:attribute[id] | /xs:schema/xs:element[biblioentry]/xs:complexType/xs:attribute[id]\tdatatype-property\tDTPROP_ATTR\t"));
        assert_eq!(write_trace(&MappingTrace::default()), "");
    }

    #[test]
    fn cardinality_on_request() {
        let opts = GenOptions {
            emit_cardinality: true,
            ..GenOptions::default()
        };
        let o = gen(samples::BIBLIOGRAPHY_XSD, &opts).ontology;
        let entry = o.class("biblioentry").unwrap();
        let on = |p: &str| {
            entry
                .restrictions
                .iter()
                .filter(|r| r.property.fragment == p)
                .map(|r| (r.kind, r.value))
                .collect::<Vec<_>>()
        };
        assert_eq!(on("hasauthor"), [(CardinalityKind::Min, 1)]);
        assert_eq!(on("haspublisher"), [(CardinalityKind::Exact, 1)]);
        // biblioentry is unbounded but required: min 1 on the root class.
        let root = o.class("bibliography").unwrap();
        assert_eq!(root.restrictions.len(), 1);
        let author = o.class("author").unwrap();
        assert!(author
            .restrictions
            .iter()
            .any(|r| r.property.fragment == "othername" && r.kind == CardinalityKind::Max));
        let off = gen(samples::BIBLIOGRAPHY_XSD, &GenOptions::default()).ontology;
        assert!(off.classes.iter().all(|c| c.restrictions.is_empty()));
    }

    #[test]
    fn extension_is_a_subclass_axiom() {
        let g = gen(samples::PERSON_EXTENSION_XSD, &GenOptions::default());
        let author = g.ontology.class("authorType").unwrap();
        assert_eq!(author.subclass_of[0].fragment, "personType");
        assert_eq!(g.trace.count(EntityKind::SubclassAxiom), 1);
        assert_eq!(g.ontology.datatype_property("name").unwrap().domain.members()[0].fragment, "personType");
        assert_eq!(
            g.ontology.datatype_property("affiliation").unwrap().domain.members()[0].fragment,
            "authorType"
        );
    }

    #[test]
    fn mixed_type_gets_text_property() {
        let g = gen(
            r#"<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema"><xs:element name="para"><xs:complexType mixed="true"><xs:sequence><xs:element name="b" type="xs:string" minOccurs="0"/></xs:sequence></xs:complexType></xs:element></xs:schema>"#,
            &GenOptions::default(),
        );
        let p = g.ontology.datatype_property(TEXT_CONTENT_PROPERTY).unwrap();
        assert_eq!(p.range, DataRange::Datatype(Builtin::String));
        assert_eq!(p.domain, DomainExpr::Class(g.ontology.iri("para")));
        assert!(g.trace.bridges.iter().any(|b| b.rule == Rule::DtpropMixedText));
    }

    #[test]
    fn defined_simple_type_ranges() {
        let src = r#"<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:simpleType name="year"><xs:restriction base="xs:integer"/></xs:simpleType>
  <xs:element name="r"><xs:complexType><xs:sequence><xs:element name="y" type="year"/></xs:sequence></xs:complexType></xs:element>
</xs:schema>"#;
        let g = gen(src, &GenOptions::default());
        let y = g.ontology.datatype_property("y").unwrap();
        assert_eq!(y.range, DataRange::Datatype(Builtin::AnyType));
        assert_eq!(check_dl_profile(&g.ontology).len(), 1);
        let strict = gen(
            src,
            &GenOptions {
                strict_dl: true,
                ..GenOptions::default()
            },
        );
        assert_eq!(strict.ontology.datatype_property("y").unwrap().range, DataRange::Literal);
        assert!(check_dl_profile(&strict.ontology).is_empty());
        assert!(strict.trace.bridges.iter().any(|b| b.rule == Rule::DefinedSimpleAnytype));
    }

    #[test]
    fn groups_become_classes_with_has_properties() {
        let src = r#"<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:group name="names"><xs:sequence><xs:element name="first" type="xs:string"/></xs:sequence></xs:group>
  <xs:attributeGroup name="ids"><xs:attribute name="key" type="xs:ID"/></xs:attributeGroup>
  <xs:element name="person"><xs:complexType><xs:sequence><xs:group ref="names"/></xs:sequence><xs:attributeGroup ref="ids"/></xs:complexType></xs:element>
</xs:schema>"#;
        let o = gen(src, &GenOptions::default()).ontology;
        assert_eq!(fragments(o.classes.iter().map(|c| &c.iri)), ["ids", "names", "person"]);
        assert_eq!(o.object_property("hasnames").unwrap().range.fragment, "names");
        assert_eq!(o.object_property("hasids").unwrap().domain.members()[0].fragment, "person");
        assert_eq!(o.datatype_property("key").unwrap().domain.members()[0].fragment, "ids");
    }

    #[test]
    fn clashing_anonymous_names_get_suffixes() {
        let src = r#"<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:element name="r"><xs:complexType><xs:sequence>
    <xs:element name="a"><xs:complexType><xs:sequence><xs:element name="item"><xs:complexType><xs:attribute name="x" type="xs:int"/></xs:complexType></xs:element></xs:sequence></xs:complexType></xs:element>
    <xs:element name="b"><xs:complexType><xs:sequence><xs:element name="item"><xs:complexType><xs:attribute name="y" type="xs:int"/></xs:complexType></xs:element></xs:sequence></xs:complexType></xs:element>
  </xs:sequence></xs:complexType></xs:element>
</xs:schema>"#;
        let g = gen(src, &GenOptions::default());
        assert!(g.ontology.class("item").is_some());
        assert!(g.ontology.class("item_2").is_some());
        assert!(g.ontology.object_property("hasitem_2").is_some());
        assert_eq!(check_dl_profile(&g.ontology).len(), 1);
    }

    #[test]
    fn conflicting_ranges_split_per_domain() {
        let src = r#"<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:element name="r"><xs:complexType><xs:sequence>
    <xs:element name="a"><xs:complexType><xs:attribute name="v" type="xs:int"/></xs:complexType></xs:element>
    <xs:element name="b"><xs:complexType><xs:attribute name="v" type="xs:string"/></xs:complexType></xs:element>
  </xs:sequence></xs:complexType></xs:element>
</xs:schema>"#;
        let g = gen(src, &GenOptions::default());
        assert!(g.ontology.datatype_property("a.v").is_some());
        assert!(g.ontology.datatype_property("b.v").is_some());
        assert_eq!(g.warnings.len(), 1);
    }

    #[test]
    fn recursive_type_has_self_property() {
        let o = gen(samples::RECURSIVE_XSD, &GenOptions::default()).ontology;
        let p = o.object_property("haspart").unwrap();
        assert_eq!((p.domain.members()[0].fragment.as_str(), p.range.fragment.as_str()), ("part", "part"));
    }
}
