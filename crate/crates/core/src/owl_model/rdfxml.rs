use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::xml_doc::{escape_attr, escape_text};

use super::*;

struct Out {
    text: String,
}

impl Out {
    fn line(&mut self, depth: usize, s: &str) {
        for _ in 0..depth {
            self.text.push_str("  ");
        }
        self.text.push_str(s);
        self.text.push('\n');
    }
}

fn resource(tag: &str, iri: &str) -> String {
    format!("<{} rdf:resource=\"{}\"/>", tag, escape_attr(iri))
}

fn domain(out: &mut Out, d: &DomainExpr) {
    match d {
        DomainExpr::Class(c) => out.line(2, &resource("rdfs:domain", &c.full())),
        DomainExpr::AllOf(m) => {
            for c in m {
                out.line(2, &resource("rdfs:domain", &c.full()));
            }
        }
        DomainExpr::Union(m) => {
            out.line(2, "<rdfs:domain>");
            out.line(3, "<owl:Class>");
            out.line(4, "<owl:unionOf rdf:parseType=\"Collection\">");
            for c in m {
                out.line(5, &format!("<rdf:Description rdf:about=\"{}\"/>", escape_attr(&c.full())));
            }
            out.line(4, "</owl:unionOf>");
            out.line(3, "</owl:Class>");
            out.line(2, "</rdfs:domain>");
        }
    }
}

fn label(out: &mut Out, s: &str) {
    out.line(2, &format!("<rdfs:label>{}</rdfs:label>", escape_text(s)));
}

/// RDF/XML serialization with the same entity order as the Turtle writer.
pub fn serialize_rdfxml(o: &OntologyModel) -> String {
    // Property elements in individuals need a namespace prefix per base.
    let bases: BTreeSet<&str> = o
        .individuals
        .iter()
        .flat_map(|i| {
            i.object_assertions
                .iter()
                .map(|(p, _)| p.base.as_str())
                .chain(i.data_assertions.iter().map(|a| a.property.base.as_str()))
        })
        .collect();
    let prefix_of = |base: &str| format!("ns{}", bases.iter().position(|b| *b == base).unwrap_or(0));

    let mut out = Out { text: String::new() };
    out.line(0, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let mut root = format!(
        "<rdf:RDF xmlns:rdf=\"{}\" xmlns:rdfs=\"{}\" xmlns:owl=\"{}\" xmlns:xsd=\"{}\"",
        RDF_NS, RDFS_NS, OWL_NS, XSD_HASH_NS
    );
    for b in &bases {
        let _ = write!(root, " xmlns:{}=\"{}#\"", prefix_of(b), escape_attr(b));
    }
    root.push('>');
    out.line(0, &root);

    if o.imports.is_empty() {
        out.line(1, &format!("<owl:Ontology rdf:about=\"{}\"/>", escape_attr(&o.ontology_iri)));
    } else {
        out.line(1, &format!("<owl:Ontology rdf:about=\"{}\">", escape_attr(&o.ontology_iri)));
        for i in &o.imports {
            out.line(2, &resource("owl:imports", i));
        }
        out.line(1, "</owl:Ontology>");
    }

    for c in sorted(&o.classes, |c| &c.iri) {
        out.line(1, &format!("<owl:Class rdf:about=\"{}\">", escape_attr(&c.iri.full())));
        label(&mut out, &c.label);
        for s in &c.subclass_of {
            out.line(2, &resource("rdfs:subClassOf", &s.full()));
        }
        for r in &c.restrictions {
            out.line(2, "<rdfs:subClassOf>");
            out.line(3, "<owl:Restriction>");
            out.line(4, &resource("owl:onProperty", &r.property.full()));
            out.line(
                4,
                &format!(
                    "<owl:{0} rdf:datatype=\"{1}nonNegativeInteger\">{2}</owl:{0}>",
                    r.kind.owl_local_name(),
                    XSD_HASH_NS,
                    r.value
                ),
            );
            out.line(3, "</owl:Restriction>");
            out.line(2, "</rdfs:subClassOf>");
        }
        out.line(1, "</owl:Class>");
    }
    for p in sorted(&o.object_properties, |p| &p.iri) {
        out.line(1, &format!("<owl:ObjectProperty rdf:about=\"{}\">", escape_attr(&p.iri.full())));
        label(&mut out, &p.label);
        domain(&mut out, &p.domain);
        out.line(2, &resource("rdfs:range", &p.range.full()));
        out.line(1, "</owl:ObjectProperty>");
    }
    for p in sorted(&o.datatype_properties, |p| &p.iri) {
        out.line(1, &format!("<owl:DatatypeProperty rdf:about=\"{}\">", escape_attr(&p.iri.full())));
        label(&mut out, &p.label);
        domain(&mut out, &p.domain);
        out.line(2, &resource("rdfs:range", &p.range.iri()));
        out.line(1, "</owl:DatatypeProperty>");
    }
    for i in sorted(&o.individuals, |i| &i.iri) {
        out.line(1, &format!("<owl:NamedIndividual rdf:about=\"{}\">", escape_attr(&i.iri.full())));
        out.line(2, &resource("rdf:type", &i.class.full()));
        for (p, target) in &i.object_assertions {
            let tag = format!("{}:{}", prefix_of(&p.base), p.fragment);
            out.line(2, &resource(&tag, &target.full()));
        }
        for a in &i.data_assertions {
            let tag = format!("{}:{}", prefix_of(&a.property.base), a.property.fragment);
            out.line(
                2,
                &format!(
                    "<{0} rdf:datatype=\"{1}\">{2}</{0}>",
                    tag,
                    escape_attr(&a.datatype.iri()),
                    escape_text(&a.value)
                ),
            );
        }
        out.line(1, "</owl:NamedIndividual>");
    }
    out.line(0, "</rdf:RDF>");
    out.text
}
