//! Individuals from instance data: one per element whose type maps to a
//! class, linked through the object properties of the trace, with simple
//! children, attributes and mixed text as typed data assertions.

use std::collections::HashMap;

use thiserror::Error;

use crate::datatypes::Builtin;
use crate::owl_gen::MappingTrace;
use crate::owl_model::{sanitize_fragment, DataAssertion, DataRange, Individual, Iri, OntologyModel};
use crate::xml_doc::{text_content, XmlDocument, XmlElement};
use crate::xsd_model::SchemaModel;
use crate::xsg::{build_xsg, EdgeKind, SchemaGraph, VertexKind, XsgError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndividualNaming {
    /// Sanitized value of an `id` attribute, else the ordinal path.
    #[default]
    IdAttribute,
    /// Root-to-node path with 1-based ordinals among same-named siblings.
    PathOrdinal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AboxError {
    #[error("{source_id}: individuals at {}:{} and {}:{} both get IRI {iri}", first.0, first.1, second.0, second.1)]
    NamingCollision {
        iri: String,
        source_id: String,
        first: (usize, usize),
        second: (usize, usize),
    },
    #[error("{source_id}:{}:{}: {message}", position.0, position.1)]
    Unmapped {
        source_id: String,
        position: (usize, usize),
        message: String,
    },
    #[error(transparent)]
    Graph(#[from] XsgError),
}

struct Task<'d> {
    elem: &'d XmlElement,
    vertex: usize,
    /// Subject and property that link to this element's individual.
    link: Option<(usize, Iri)>,
    path: String,
}

struct Populator<'a> {
    graph: SchemaGraph,
    tbox: &'a OntologyModel,
    trace: &'a MappingTrace,
    naming: IndividualNaming,
    source_id: &'a str,
    individuals: Vec<Individual>,
    positions: HashMap<String, (usize, usize)>,
    /// (parent individual, group edge) -> group individual
    group_individuals: HashMap<(usize, usize), usize>,
}

/// Adds individuals for `doc` to a copy of `tbox`. The document is expected
/// to validate against `schema`.
pub fn populate(
    doc: &XmlDocument,
    schema: &SchemaModel,
    tbox: &OntologyModel,
    trace: &MappingTrace,
    naming: IndividualNaming,
) -> Result<OntologyModel, AboxError> {
    let graph = build_xsg(schema)?;
    let root = graph
        .vertices
        .iter()
        .find(|v| v.kind == VertexKind::Element && v.global && v.label == doc.root.name.local)
        .map(|v| v.id)
        .ok_or_else(|| AboxError::Unmapped {
            source_id: doc.source_id.clone(),
            position: doc.root.position,
            message: format!("no global element `{}` in the schema", doc.root.name.local),
        })?;
    let mut p = Populator {
        graph,
        tbox,
        trace,
        naming,
        source_id: &doc.source_id,
        individuals: Vec::new(),
        positions: HashMap::new(),
        group_individuals: HashMap::new(),
    };
    p.run(&doc.root, root)?;
    let mut out = tbox.clone();
    out.individuals.extend(p.individuals);
    Ok(out)
}

impl<'a> Populator<'a> {
    fn unmapped(&self, e: &XmlElement, message: String) -> AboxError {
        AboxError::Unmapped {
            source_id: self.source_id.to_string(),
            position: e.position,
            message,
        }
    }

    fn class_vertex(&self, element_vertex: usize) -> Option<usize> {
        self.graph
            .type_of(element_vertex)
            .filter(|&t| self.graph.vertex(t).kind.is_class_source())
    }

    fn class_iri(&self, vertex: usize, e: &XmlElement) -> Result<Iri, AboxError> {
        let path = &self.graph.vertex(vertex).schema_path;
        self.trace
            .class_at(path)
            .map(|b| b.iri.clone())
            .ok_or_else(|| self.unmapped(e, format!("no class for `{}`", path)))
    }

    fn property_iri(&self, path: &str, e: &XmlElement) -> Result<Iri, AboxError> {
        self.trace
            .property_at(path)
            .map(|b| b.iri.clone())
            .ok_or_else(|| self.unmapped(e, format!("no property for `{}`", path)))
    }

    /// Member edges leading from `container` to the element or attribute
    /// `name`: zero or more group edges followed by the member edge. Base
    /// types are searched too; inherited members need no intermediate.
    fn find_member(&self, container: usize, name: &str, attribute: bool) -> Option<Vec<usize>> {
        let (member, group) = if attribute {
            (VertexKind::Attribute, VertexKind::AttributeGroup)
        } else {
            (VertexKind::Element, VertexKind::ElementGroup)
        };
        let mut visited = Vec::new();
        self.find_in(container, name, member, group, &mut visited)
    }

    fn find_in(
        &self,
        container: usize,
        name: &str,
        member: VertexKind,
        group: VertexKind,
        visited: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        if visited.contains(&container) {
            return None;
        }
        visited.push(container);
        for e in self.graph.outgoing(container) {
            let t = self.graph.vertex(e.to);
            match e.kind {
                EdgeKind::TypeToMember if t.kind == member && t.label == name => return Some(vec![e.id]),
                EdgeKind::TypeToMember if t.kind == group => {
                    if let Some(mut rest) = self.find_in(t.id, name, member, group, visited) {
                        rest.insert(0, e.id);
                        return Some(rest);
                    }
                }
                _ => {}
            }
        }
        let (_, base) = self.graph.base_of(container)?;
        self.find_in(base, name, member, group, visited)
    }

    /// Literal datatype: the property range, or the member's own base type
    /// when the range is anyType or rdfs:Literal.
    fn literal_type(&self, property: &Iri, member_vertex: usize) -> Builtin {
        let range = self
            .tbox
            .datatype_properties
            .iter()
            .find(|p| &p.iri == property)
            .map(|p| p.range);
        match range {
            Some(DataRange::Datatype(b)) if !matches!(b, Builtin::AnyType | Builtin::AnySimpleType) => b,
            _ => match self.graph.vertex(member_vertex).value_type.as_ref().map(|v| v.base()) {
                Some(Builtin::AnyType | Builtin::AnySimpleType) | None => Builtin::String,
                Some(b) => b,
            },
        }
    }

    fn new_individual(&mut self, fragment: String, class: Iri, e: &XmlElement) -> Result<usize, AboxError> {
        let iri = Iri::new(self.tbox.namespace.clone(), fragment);
        if let Some(&first) = self.positions.get(&iri.fragment) {
            return Err(AboxError::NamingCollision {
                iri: iri.full(),
                source_id: self.source_id.to_string(),
                first,
                second: e.position,
            });
        }
        self.positions.insert(iri.fragment.clone(), e.position);
        self.individuals.push(Individual {
            iri,
            class,
            object_assertions: Vec::new(),
            data_assertions: Vec::new(),
        });
        Ok(self.individuals.len() - 1)
    }

    /// Subject for a member reached through `hops` (group edges first).
    fn subject_for(&mut self, subject: usize, hops: &[usize], e: &XmlElement) -> Result<usize, AboxError> {
        let mut current = subject;
        for &edge in &hops[..hops.len() - 1] {
            if let Some(&g) = self.group_individuals.get(&(current, edge)) {
                current = g;
                continue;
            }
            let ed = self.graph.edges[edge].clone();
            let class = self.class_iri(ed.to, e)?;
            let property = self.property_iri(&ed.schema_path, e)?;
            let fragment = format!(
                "{}.{}",
                self.individuals[current].iri.fragment,
                sanitize_fragment(&self.graph.vertex(ed.to).label)
            );
            let g = self.new_individual(fragment, class, e)?;
            let target = self.individuals[g].iri.clone();
            self.individuals[current].object_assertions.push((property, target));
            self.group_individuals.insert((current, edge), g);
            current = g;
        }
        Ok(current)
    }

    fn data(&mut self, subject: usize, hops: &[usize], value: String, e: &XmlElement) -> Result<(), AboxError> {
        let subject = self.subject_for(subject, hops, e)?;
        let edge = self.graph.edges[*hops.last().expect("non-empty")].clone();
        let property = self.property_iri(&edge.schema_path, e)?;
        let datatype = self.literal_type(&property, edge.to);
        self.individuals[subject].data_assertions.push(DataAssertion {
            property,
            value,
            datatype,
        });
        Ok(())
    }

    fn run(&mut self, root: &XmlElement, root_vertex: usize) -> Result<(), AboxError> {
        let mut stack = vec![Task {
            elem: root,
            vertex: root_vertex,
            link: None,
            path: format!("{}_1", root.name.local),
        }];
        while let Some(task) = stack.pop() {
            let e = task.elem;
            let Some(t) = self.class_vertex(task.vertex) else {
                continue;
            };
            let class = self.class_iri(t, e)?;
            let fragment = match (self.naming, e.attribute("id")) {
                (IndividualNaming::IdAttribute, Some(id)) => sanitize_fragment(id),
                _ => sanitize_fragment(&task.path),
            };
            let me = self.new_individual(fragment, class, e)?;
            if let Some((parent, property)) = task.link {
                let target = self.individuals[me].iri.clone();
                self.individuals[parent].object_assertions.push((property, target));
            }

            for (name, value) in &e.attributes {
                if name.is_namespace_decl() || matches!(name.prefix.as_deref(), Some("xsi") | Some("xml")) {
                    continue;
                }
                let hops = self
                    .find_member(t, &name.local, true)
                    .ok_or_else(|| self.unmapped(e, format!("attribute `{}` is not declared", name.local)))?;
                self.data(me, &hops, value.clone(), e)?;
            }

            if self.graph.vertex(t).mixed {
                let text = text_content(e);
                if !text.is_empty() {
                    let path = format!("{}/text()", self.graph.vertex(t).schema_path);
                    let property = self.property_iri(&path, e)?;
                    self.individuals[me].data_assertions.push(DataAssertion {
                        property,
                        value: text,
                        datatype: Builtin::String,
                    });
                }
            }

            let mut ordinals: HashMap<&str, usize> = HashMap::new();
            let mut children = Vec::new();
            for c in e.child_elements() {
                let n = ordinals.entry(c.name.local.as_str()).or_insert(0);
                *n += 1;
                let hops = self
                    .find_member(t, &c.name.local, false)
                    .ok_or_else(|| self.unmapped(c, format!("element `{}` is not declared here", c.name.local)))?;
                let member = self.graph.edges[*hops.last().expect("non-empty")].clone();
                if self.class_vertex(member.to).is_some() {
                    let subject = self.subject_for(me, &hops, c)?;
                    let property = self.property_iri(&member.schema_path, c)?;
                    children.push(Task {
                        elem: c,
                        vertex: member.to,
                        link: Some((subject, property)),
                        path: format!("{}.{}_{}", task.path, c.name.local, n),
                    });
                } else {
                    self.data(me, &hops, text_content(c), c)?;
                }
            }
            stack.extend(children.into_iter().rev());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::owl_gen::{generate_tbox, GenOptions, TEXT_CONTENT_PROPERTY};
    use crate::owl_model::check_invariants;
    use crate::samples;
    use crate::xml_doc::parse_xml;
    use crate::xsd_model::read_schema;

    fn setup(xsd: &str, xml: &str, naming: IndividualNaming) -> Result<OntologyModel, AboxError> {
        let schema = read_schema(xsd.as_bytes(), "s").unwrap();
        let graph = build_xsg(&schema).unwrap();
        let g = generate_tbox(&schema, &graph, &GenOptions::default());
        let doc = parse_xml(xml.as_bytes(), "d").unwrap();
        populate(&doc, &schema, &g.ontology, &g.trace, naming)
    }

    #[test]
    fn excerpt_individuals() {
        let o = setup(
            samples::BIBLIOGRAPHY_XSD,
            samples::BIBLIOGRAPHY_EXCERPT_XML,
            IndividualNaming::IdAttribute,
        )
        .unwrap();
        assert_eq!(o.individuals.len(), 4);
        let root = o.individual("personal_identity").unwrap();
        assert_eq!(root.class.fragment, "bibliography");
        assert_eq!(root.object_assertions.len(), 1);
        assert_eq!(root.object_assertions[0].0.fragment, "hasbiblioentry");
        assert_eq!(root.object_assertions[0].1.fragment, "FHIW13C-1234");
        let entry = o.individual("FHIW13C-1234").unwrap();
        let value = |p: &str| {
            entry
                .data_assertions
                .iter()
                .find(|a| a.property.fragment == p)
                .map(|a| (a.value.as_str(), a.datatype))
        };
        assert_eq!(value("title"), Some(("Personal Identity: A Philosophical Analysis", Builtin::String)));
        assert_eq!(value("pubdate"), Some(("1977", Builtin::Integer)));
        assert_eq!(value("id"), Some(("FHIW13C-1234", Builtin::NCName)));
        let author = o.individual("bibliography_1.biblioentry_1.author_1").unwrap();
        assert!(author.data_assertions.iter().all(|a| a.property.fragment != "othername"));
        assert_eq!(check_invariants(&o, None), Ok(()));
    }

    #[test]
    fn path_ordinal_naming() {
        let o = setup(samples::BIBLIOGRAPHY_XSD, samples::BIBLIOGRAPHY_XML, IndividualNaming::PathOrdinal).unwrap();
        assert!(o.individual("bibliography_1.biblioentry_3.author_2").is_some());
        assert!(o.individual("personal_identity").is_none());
        assert_eq!(check_invariants(&o, None), Ok(()));
    }

    #[test]
    fn duplicate_ids_collide() {
        let xml = samples::BIBLIOGRAPHY_XML.replace("FHIW13C-1235", "FHIW13C-1234");
        let err = setup(samples::BIBLIOGRAPHY_XSD, &xml, IndividualNaming::IdAttribute).unwrap_err();
        let AboxError::NamingCollision { first, second, .. } = err else {
            panic!("expected a collision, got {err:?}")
        };
        assert!(first.0 < second.0);
    }

    #[test]
    fn groups_extension_and_mixed_text() {
        let xsd = r#"<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:group name="names"><xs:sequence><xs:element name="first" type="xs:string"/></xs:sequence></xs:group>
  <xs:complexType name="base"><xs:sequence><xs:group ref="names"/></xs:sequence><xs:attribute name="n" type="xs:int"/></xs:complexType>
  <xs:complexType name="derived" mixed="true"><xs:complexContent><xs:extension base="base"><xs:sequence><xs:element name="kid" type="base" minOccurs="0"/></xs:sequence></xs:extension></xs:complexContent></xs:complexType>
  <xs:element name="root" type="derived"/>
</xs:schema>"#;
        let xml = r#"<root n="4">hello <first>Ann</first><kid><first>Bo</first></kid></root>"#;
        let o = setup(xsd, xml, IndividualNaming::PathOrdinal).unwrap();
        assert_eq!(o.individuals.len(), 4);
        let root = o.individual("root_1").unwrap();
        assert_eq!(root.class.fragment, "derived");
        assert!(root.data_assertions.iter().any(|a| a.property.fragment == "n" && a.datatype == Builtin::Int));
        assert!(root
            .data_assertions
            .iter()
            .any(|a| a.property.fragment == TEXT_CONTENT_PROPERTY && a.value == "hello"));
        let names = o.individual("root_1.names").unwrap();
        assert_eq!(names.data_assertions[0].value, "Ann");
        assert!(o.individual("root_1.kid_1.names").is_some());
        assert_eq!(check_invariants(&o, None), Ok(()));
    }
}
