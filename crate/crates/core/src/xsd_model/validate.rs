use std::collections::HashMap;
use std::fmt;

use crate::xml_doc::{text_content, XmlDocument, XmlElement};

use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    UnknownElement,
    /// Too few or too many occurrences, including a missing required child.
    Occurrence,
    MissingAttribute,
    UnknownAttribute,
    Datatype,
    UnexpectedText,
    /// Element children inside an element of simple type.
    UnexpectedElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Instance path such as `/bibliography[1]/biblioentry[2]`.
    pub path: String,
    pub position: (usize, usize),
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}: {}",
            self.position.0, self.position.1, self.path, self.message
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Checks `doc` against the constructs of `schema` this crate understands.
pub fn validate(doc: &XmlDocument, schema: &SchemaModel) -> ValidationReport {
    let mut v = Validator {
        schema,
        report: ValidationReport::default(),
    };
    let root = &doc.root;
    let path = format!("/{}[1]", root.name.local);
    match schema.element(&root.name.local) {
        Some(decl) => v.element(root, &decl.type_ref, &path),
        None => v.push(
            ViolationKind::UnknownElement,
            &path,
            root.position,
            format!("no global declaration for root element `{}`", root.name.local),
        ),
    }
    v.report
}

struct Validator<'s> {
    schema: &'s SchemaModel,
    report: ValidationReport,
}

enum Content<'s> {
    Any,
    Simple(Builtin),
    Complex(&'s ComplexType),
}

fn ignorable_attr(n: &crate::xml_doc::XmlName) -> bool {
    n.is_namespace_decl() || matches!(n.prefix.as_deref(), Some("xsi") | Some("xml"))
}

impl<'s> Validator<'s> {
    fn push(&mut self, kind: ViolationKind, path: &str, position: (usize, usize), message: String) {
        self.report.violations.push(Violation {
            kind,
            path: path.to_string(),
            position,
            message,
        });
    }

    fn content(&self, t: &'s TypeRef) -> Content<'s> {
        match t {
            TypeRef::Builtin(Builtin::AnyType) => Content::Any,
            TypeRef::Builtin(b) => Content::Simple(*b),
            TypeRef::AnonymousSimple(s) => Content::Simple(s.base),
            TypeRef::AnonymousComplex(c) => Content::Complex(c),
            TypeRef::Named(n) => match self.schema.global_type(n) {
                Some(GlobalType::Complex(c)) => Content::Complex(c),
                Some(GlobalType::Simple(s)) => Content::Simple(s.base),
                None => Content::Any,
            },
        }
    }

    fn element(&mut self, e: &XmlElement, t: &'s TypeRef, path: &str) {
        match self.content(t) {
            Content::Any => {}
            Content::Simple(b) => {
                for (n, _) in &e.attributes {
                    if !ignorable_attr(n) {
                        self.push(
                            ViolationKind::UnknownAttribute,
                            path,
                            e.position,
                            format!("attribute `{}` is not allowed on a simple-typed element", n),
                        );
                    }
                }
                if let Some(c) = e.child_elements().next() {
                    self.push(
                        ViolationKind::UnexpectedElement,
                        path,
                        c.position,
                        format!("element `{}` inside simple content", c.name.local),
                    );
                }
                let value = text_content(e);
                if !b.accepts(&value) {
                    self.push(
                        ViolationKind::Datatype,
                        path,
                        e.position,
                        format!("`{}` is not a valid {}", value, b),
                    );
                }
            }
            Content::Complex(ct) => self.complex(e, ct, path),
        }
    }

    fn complex(&mut self, e: &XmlElement, ct: &'s ComplexType, path: &str) {
        let attrs = effective_attributes(self.schema, ct);
        for a in &attrs {
            match e.attributes.iter().find(|(n, _)| !ignorable_attr(n) && n.local == a.name) {
                None if a.required => self.push(
                    ViolationKind::MissingAttribute,
                    path,
                    e.position,
                    format!("missing required attribute `{}`", a.name),
                ),
                None => {}
                Some((_, value)) => {
                    if let Some(b) = self.schema.simple_base(&a.datatype) {
                        if !b.accepts(value) {
                            self.push(
                                ViolationKind::Datatype,
                                path,
                                e.position,
                                format!("attribute `{}`: `{}` is not a valid {}", a.name, value, b),
                            );
                        }
                    }
                }
            }
        }
        for (n, _) in &e.attributes {
            if !ignorable_attr(n) && !attrs.iter().any(|a| a.name == n.local) {
                self.push(
                    ViolationKind::UnknownAttribute,
                    path,
                    e.position,
                    format!("undeclared attribute `{}`", n),
                );
            }
        }

        if !effective_mixed(self.schema, ct) {
            let text = text_content(e);
            if !text.is_empty() {
                self.push(
                    ViolationKind::UnexpectedText,
                    path,
                    e.position,
                    format!("text `{}` in element-only content", abbreviate(&text)),
                );
            }
        }

        let particles = effective_particles(self.schema, ct);
        let children: Vec<&XmlElement> = e.child_elements().collect();
        let mut ordinals: HashMap<&str, usize> = HashMap::new();
        let child_paths: Vec<String> = children
            .iter()
            .map(|c| {
                let n = ordinals.entry(c.name.local.as_str()).or_insert(0);
                *n += 1;
                format!("{}/{}[{}]", path, c.name.local, n)
            })
            .collect();
        let mut pos = 0;
        self.sequence(&particles, &children, &child_paths, &mut pos, e, path);
        for (c, cp) in children[pos..].iter().zip(&child_paths[pos..]) {
            let known = particle_names(self.schema, &particles).contains(&c.name.local.as_str());
            if known {
                self.push(
                    ViolationKind::Occurrence,
                    cp,
                    c.position,
                    format!("unexpected occurrence of `{}` (too many or out of order)", c.name.local),
                );
            } else {
                self.push(
                    ViolationKind::UnknownElement,
                    cp,
                    c.position,
                    format!("element `{}` is not declared in this context", c.name.local),
                );
            }
        }
    }

    fn sequence(
        &mut self,
        particles: &[&'s Particle],
        children: &[&XmlElement],
        paths: &[String],
        pos: &mut usize,
        parent: &XmlElement,
        parent_path: &str,
    ) {
        for p in particles {
            match &p.term {
                ParticleTerm::GroupRef(g) => {
                    let Some(group) = self.schema.group(g) else { continue };
                    let inner: Vec<&Particle> = group.particles.iter().collect();
                    let first = first_names(self.schema, &inner);
                    let mut count = 0;
                    while *pos < children.len()
                        && first.contains(&children[*pos].name.local.as_str())
                        && p.occurs.max.allows(count + 1)
                    {
                        let before = *pos;
                        self.sequence(&inner, children, paths, pos, parent, parent_path);
                        count += 1;
                        if *pos == before {
                            break;
                        }
                    }
                    if count < p.occurs.min {
                        if count == 0 {
                            // Report the missing members themselves.
                            self.sequence(&inner, children, paths, pos, parent, parent_path);
                        } else {
                            self.push(
                                ViolationKind::Occurrence,
                                parent_path,
                                parent.position,
                                format!("group `{}` occurs {} times, expected at least {}", g, count, p.occurs.min),
                            );
                        }
                    }
                }
                _ => {
                    let name = p.element_name().unwrap_or_default();
                    let type_ref = match &p.term {
                        ParticleTerm::Element(d) => Some(&d.type_ref),
                        ParticleTerm::ElementRef(r) => self.schema.element(r).map(|d| &d.type_ref),
                        ParticleTerm::GroupRef(_) => None,
                    };
                    let mut count = 0;
                    while *pos < children.len()
                        && children[*pos].name.local == name
                        && p.occurs.max.allows(count + 1)
                    {
                        if let Some(t) = type_ref {
                            self.element(children[*pos], t, &paths[*pos]);
                        }
                        count += 1;
                        *pos += 1;
                    }
                    if count < p.occurs.min {
                        let message = if count == 0 {
                            format!("missing required child `{}`", name)
                        } else {
                            format!("`{}` occurs {} times, expected at least {}", name, count, p.occurs.min)
                        };
                        self.push(ViolationKind::Occurrence, parent_path, parent.position, message);
                    }
                }
            }
        }
    }
}

fn abbreviate(s: &str) -> String {
    if s.chars().count() > 40 {
        format!("{}...", s.chars().take(40).collect::<String>())
    } else {
        s.to_string()
    }
}

/// Content model after applying derivation: extension appends to the base,
/// restriction restates it.
pub(crate) fn effective_particles<'s>(schema: &'s SchemaModel, ct: &'s ComplexType) -> Vec<&'s Particle> {
    let mut out = Vec::new();
    if let Some(d) = &ct.derivation {
        if d.kind == DerivationKind::Extension {
            if let Some(base) = schema.complex_type(&d.base) {
                out = effective_particles(schema, base);
            }
        }
    }
    out.extend(ct.particles.iter());
    out
}

pub(crate) fn effective_attributes<'s>(schema: &'s SchemaModel, ct: &'s ComplexType) -> Vec<&'s AttrDecl> {
    let mut out: Vec<&AttrDecl> = Vec::new();
    fn add<'s>(out: &mut Vec<&'s AttrDecl>, a: &'s AttrDecl) {
        if !out.iter().any(|x| x.name == a.name) {
            out.push(a);
        }
    }
    fn add_group<'s>(schema: &'s SchemaModel, out: &mut Vec<&'s AttrDecl>, name: &str, depth: usize) {
        if depth > 64 {
            return;
        }
        if let Some(g) = schema.attribute_group(name) {
            for a in &g.attributes {
                add(out, a);
            }
            for r in &g.attr_group_refs {
                add_group(schema, out, r, depth + 1);
            }
        }
    }
    for a in &ct.attributes {
        add(&mut out, a);
    }
    for r in &ct.attr_group_refs {
        add_group(schema, &mut out, r, 0);
    }
    if let Some(d) = &ct.derivation {
        if let Some(base) = schema.complex_type(&d.base) {
            for a in effective_attributes(schema, base) {
                add(&mut out, a);
            }
        }
    }
    out
}

pub(crate) fn effective_mixed(schema: &SchemaModel, ct: &ComplexType) -> bool {
    if ct.mixed {
        return true;
    }
    match &ct.derivation {
        Some(d) if d.kind == DerivationKind::Extension => schema
            .complex_type(&d.base)
            .is_some_and(|b| effective_mixed(schema, b)),
        _ => false,
    }
}

fn particle_names<'s>(schema: &'s SchemaModel, particles: &[&'s Particle]) -> Vec<&'s str> {
    let mut out = Vec::new();
    let mut stack: Vec<&Particle> = particles.to_vec();
    let mut seen_groups = Vec::new();
    while let Some(p) = stack.pop() {
        match &p.term {
            ParticleTerm::GroupRef(g) => {
                if !seen_groups.contains(&g.as_str()) {
                    seen_groups.push(g.as_str());
                    if let Some(group) = schema.group(g) {
                        stack.extend(group.particles.iter());
                    }
                }
            }
            _ => out.push(p.element_name().unwrap_or_default()),
        }
    }
    out
}

/// Names that may start a match of `particles`.
fn first_names<'s>(schema: &'s SchemaModel, particles: &[&'s Particle]) -> Vec<&'s str> {
    let mut out = Vec::new();
    for p in particles {
        match &p.term {
            ParticleTerm::GroupRef(g) => {
                if let Some(group) = schema.group(g) {
                    let inner: Vec<&Particle> = group.particles.iter().collect();
                    out.extend(first_names(schema, &inner));
                }
            }
            _ => out.push(p.element_name().unwrap_or_default()),
        }
        if p.occurs.min > 0 {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use crate::xml_doc::parse_xml;

    fn fig3() -> SchemaModel {
        read_schema(samples::BIBLIOGRAPHY_XSD.as_bytes(), "bibliography.xsd").unwrap()
    }

    fn doc(s: &str) -> XmlDocument {
        parse_xml(s.as_bytes(), "doc").unwrap()
    }

    #[test]
    fn bibliography_document_conforms() {
        let d = doc(samples::BIBLIOGRAPHY_XML);
        let r = validate(&d, &fig3());
        assert!(r.is_empty(), "{:?}", r);
        let excerpt = doc(samples::BIBLIOGRAPHY_EXCERPT_XML);
        assert!(validate(&excerpt, &fig3()).is_empty());
    }

    #[test]
    fn bad_pubdate_is_one_datatype_violation() {
        let text = samples::BIBLIOGRAPHY_EXCERPT_XML.replace(">1977<", ">nineteen<");
        let r = validate(&doc(&text), &fig3());
        assert_eq!(r.violations.len(), 1, "{:?}", r);
        assert_eq!(r.violations[0].kind, ViolationKind::Datatype);
        assert!(r.violations[0].message.contains("xs:integer"));
    }

    #[test]
    fn missing_title_is_one_occurrence_violation() {
        let text = samples::BIBLIOGRAPHY_EXCERPT_XML
            .replace("<title>Personal Identity: A Philosophical Analysis</title>", "");
        let r = validate(&doc(&text), &fig3());
        assert_eq!(r.violations.len(), 1, "{:?}", r);
        let v = &r.violations[0];
        assert_eq!(v.kind, ViolationKind::Occurrence);
        assert!(v.path.ends_with("biblioentry[1]"), "{}", v.path);
        assert!(v.message.contains("title"));
    }

    #[test]
    fn reports_each_violation_kind() {
        let s = read_schema(
            br#"<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:element name="r">
    <xs:complexType>
      <xs:sequence>
        <xs:element name="n" type="xs:integer" maxOccurs="2"/>
      </xs:sequence>
      <xs:attribute name="k" use="required" type="xs:boolean"/>
    </xs:complexType>
  </xs:element>
</xs:schema>"#,
            "s",
        )
        .unwrap();
        let r = validate(&doc("<r extra=\"1\">text<n>1</n><n>2</n><n>3</n><z/></r>"), &s);
        let kinds: Vec<ViolationKind> = r.violations.iter().map(|v| v.kind).collect();
        assert_eq!(
            kinds,
            vec![
                ViolationKind::MissingAttribute,
                ViolationKind::UnknownAttribute,
                ViolationKind::UnexpectedText,
                ViolationKind::Occurrence,
                ViolationKind::UnknownElement,
            ]
        );
        let r = validate(&doc("<q/>"), &s);
        assert_eq!(r.count(ViolationKind::UnknownElement), 1);
        let r = validate(&doc("<r k=\"maybe\"><n><x/>1</n></r>"), &s);
        assert_eq!(r.count(ViolationKind::Datatype), 1);
        assert_eq!(r.count(ViolationKind::UnexpectedElement), 1);
    }

    #[test]
    fn bounded_max_occurs_is_enforced_exactly() {
        let s = read_schema(
            br#"<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:element name="r"><xs:complexType><xs:sequence>
    <xs:element name="n" type="xs:string" minOccurs="2" maxOccurs="3"/>
  </xs:sequence></xs:complexType></xs:element>
</xs:schema>"#,
            "s",
        )
        .unwrap();
        assert!(validate(&doc("<r><n/><n/><n/></r>"), &s).is_empty());
        assert_eq!(validate(&doc("<r><n/></r>"), &s).count(ViolationKind::Occurrence), 1);
        assert_eq!(validate(&doc("<r><n/><n/><n/><n/></r>"), &s).count(ViolationKind::Occurrence), 1);
    }

    #[test]
    fn groups_inheritance_and_mixed() {
        let s = read_schema(
            br#"<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:group name="names"><xs:sequence>
    <xs:element name="first" type="xs:NCName"/>
    <xs:element name="last" type="xs:NCName" minOccurs="0"/>
  </xs:sequence></xs:group>
  <xs:attributeGroup name="common"><xs:attribute name="lang" type="xs:language"/></xs:attributeGroup>
  <xs:complexType name="person"><xs:sequence><xs:group ref="names"/></xs:sequence><xs:attributeGroup ref="common"/></xs:complexType>
  <xs:complexType name="author" mixed="true"><xs:complexContent><xs:extension base="person">
    <xs:sequence><xs:element name="affiliation" type="xs:string" minOccurs="0"/></xs:sequence>
  </xs:extension></xs:complexContent></xs:complexType>
  <xs:element name="author" type="author"/>
</xs:schema>"#,
            "s",
        )
        .unwrap();
        let ok = validate(
            &doc("<author lang=\"en\">Dr. <first>Ada</first><last>King</last><affiliation>Analytical Engines</affiliation></author>"),
            &s,
        );
        assert!(ok.is_empty(), "{:?}", ok);
        let bad = validate(&doc("<author><affiliation>x</affiliation></author>"), &s);
        assert_eq!(bad.count(ViolationKind::Occurrence), 1, "{:?}", bad);
        assert!(bad.violations[0].message.contains("first"));
    }
}
