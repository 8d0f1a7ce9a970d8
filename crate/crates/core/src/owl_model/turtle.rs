use std::fmt::Write as _;

use super::*;

fn prefixable(fragment: &str) -> bool {
    is_ncname(fragment) && fragment.is_ascii() && !fragment.ends_with('.')
}

fn term(o: &OntologyModel, iri: &Iri) -> String {
    if iri.base == o.namespace && prefixable(&iri.fragment) {
        format!(":{}", iri.fragment)
    } else {
        format!("<{}>", iri.full())
    }
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn datatype_term(b: Builtin) -> String {
    format!("xsd:{}", b.local_name())
}

fn range_term(r: DataRange) -> String {
    match r {
        DataRange::Datatype(b) => datatype_term(b),
        DataRange::Literal => "rdfs:Literal".to_string(),
    }
}

fn domain_lines(o: &OntologyModel, d: &DomainExpr) -> Vec<String> {
    match d {
        DomainExpr::Class(c) => vec![format!("rdfs:domain {}", term(o, c))],
        DomainExpr::Union(members) => {
            let list: Vec<String> = members.iter().map(|m| term(o, m)).collect();
            vec![format!(
                "rdfs:domain [ rdf:type owl:Class ; owl:unionOf ( {} ) ]",
                list.join(" ")
            )]
        }
        DomainExpr::AllOf(members) => members.iter().map(|m| format!("rdfs:domain {}", term(o, m))).collect(),
    }
}

fn statement(out: &mut String, subject: String, predicates: Vec<String>) {
    out.push('\n');
    out.push_str(&subject);
    for (i, p) in predicates.iter().enumerate() {
        out.push_str(if i == 0 { " " } else { " ;\n    " });
        out.push_str(p);
    }
    out.push_str(" .\n");
}

/// Turtle serialization. Entities appear as classes, object properties,
/// datatype properties, then individuals, each sorted by fragment.
pub fn serialize_turtle(o: &OntologyModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "@prefix owl: <{}> .", OWL_NS);
    let _ = writeln!(out, "@prefix rdf: <{}> .", RDF_NS);
    let _ = writeln!(out, "@prefix rdfs: <{}> .", RDFS_NS);
    let _ = writeln!(out, "@prefix xsd: <{}> .", XSD_HASH_NS);
    let _ = writeln!(out, "@prefix : <{}#> .", o.namespace);

    let mut head = vec!["rdf:type owl:Ontology".to_string()];
    head.extend(o.imports.iter().map(|i| format!("owl:imports <{}>", i)));
    statement(&mut out, format!("<{}>", o.ontology_iri), head);

    for c in sorted(&o.classes, |c| &c.iri) {
        let mut p = vec!["rdf:type owl:Class".to_string(), format!("rdfs:label {}", escape_string(&c.label))];
        p.extend(c.subclass_of.iter().map(|s| format!("rdfs:subClassOf {}", term(o, s))));
        p.extend(c.restrictions.iter().map(|r| {
            format!(
                "rdfs:subClassOf [ rdf:type owl:Restriction ; owl:onProperty {} ; owl:{} \"{}\"^^xsd:nonNegativeInteger ]",
                term(o, &r.property),
                r.kind.owl_local_name(),
                r.value
            )
        }));
        statement(&mut out, term(o, &c.iri), p);
    }
    for op in sorted(&o.object_properties, |p| &p.iri) {
        let mut p = vec![
            "rdf:type owl:ObjectProperty".to_string(),
            format!("rdfs:label {}", escape_string(&op.label)),
        ];
        p.extend(domain_lines(o, &op.domain));
        p.push(format!("rdfs:range {}", term(o, &op.range)));
        statement(&mut out, term(o, &op.iri), p);
    }
    for dp in sorted(&o.datatype_properties, |p| &p.iri) {
        let mut p = vec![
            "rdf:type owl:DatatypeProperty".to_string(),
            format!("rdfs:label {}", escape_string(&dp.label)),
        ];
        p.extend(domain_lines(o, &dp.domain));
        p.push(format!("rdfs:range {}", range_term(dp.range)));
        statement(&mut out, term(o, &dp.iri), p);
    }
    for ind in sorted(&o.individuals, |i| &i.iri) {
        let mut p = vec![format!("rdf:type owl:NamedIndividual , {}", term(o, &ind.class))];
        p.extend(
            ind.object_assertions
                .iter()
                .map(|(prop, target)| format!("{} {}", term(o, prop), term(o, target))),
        );
        p.extend(ind.data_assertions.iter().map(|a| {
            format!(
                "{} {}^^{}",
                term(o, &a.property),
                escape_string(&a.value),
                datatype_term(a.datatype)
            )
        }));
        statement(&mut out, term(o, &ind.iri), p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_ontology_is_header_only() {
        let t = serialize_turtle(&OntologyModel::new("http://example.org/onto/e"));
        assert_eq!(t.lines().filter(|l| l.starts_with("@prefix")).count(), 5);
        assert!(t.ends_with("\n<http://example.org/onto/e> rdf:type owl:Ontology .\n"));
    }

    #[test]
    fn union_domain_and_sorting() {
        let o = super::super::tests::small_model();
        let t = serialize_turtle(&o);
        assert!(t.contains("rdfs:domain [ rdf:type owl:Class ; owl:unionOf ( :a :b ) ]"));
        assert!(t.find("\n:a ").unwrap() < t.find("\n:b ").unwrap());
        assert!(t.contains(":b rdf:type owl:Class ;\n    rdfs:label \"b\" ;\n    rdfs:subClassOf :a .\n"));
    }

    #[test]
    fn unsafe_fragments_use_full_iris() {
        let o = OntologyModel::new("http://e/x");
        assert_eq!(term(&o, &o.iri("a.")), "<http://e/x#a.>");
        assert_eq!(term(&o, &Iri::new("http://other", "a")), "<http://other#a>");
        assert_eq!(escape_string("a\"b\\\n"), "\"a\\\"b\\\\\\n\"");
    }
}
