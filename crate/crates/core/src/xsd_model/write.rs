use crate::datatypes::XSD_NS;
use crate::xml_doc::escape_attr;

use super::*;

/// Writes the model as an XSD 1.0 document: `xs` prefix, two-space indent, LF.
///
/// Global components are written per symbol space: elements, then types,
/// groups and attribute groups, each in model order.
pub fn serialize_schema(model: &SchemaModel) -> String {
    let mut w = Writer { out: String::new() };
    w.out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    w.out.push_str(&format!(
        "<xs:schema xmlns:xs=\"{}\" elementFormDefault=\"qualified\">\n",
        XSD_NS
    ));
    for e in &model.elements {
        w.element(1, e, None);
    }
    for t in &model.types {
        match t {
            GlobalType::Complex(c) => w.complex_type(1, c),
            GlobalType::Simple(s) => w.simple_type(1, s),
        }
    }
    for g in &model.groups {
        w.line(1, &format!("<xs:group name=\"{}\">", escape_attr(&g.name)));
        w.sequence(2, &g.particles);
        w.line(1, "</xs:group>");
    }
    for g in &model.attribute_groups {
        if g.attributes.is_empty() && g.attr_group_refs.is_empty() {
            w.line(1, &format!("<xs:attributeGroup name=\"{}\"/>", escape_attr(&g.name)));
            continue;
        }
        w.line(1, &format!("<xs:attributeGroup name=\"{}\">", escape_attr(&g.name)));
        w.attributes(2, &g.attributes, &g.attr_group_refs);
        w.line(1, "</xs:attributeGroup>");
    }
    w.out.push_str("</xs:schema>\n");
    w.out
}

struct Writer {
    out: String,
}

fn occurs_attrs(o: Occurs) -> String {
    let mut s = String::new();
    if o.min != 1 {
        s.push_str(&format!(" minOccurs=\"{}\"", o.min));
    }
    if o.max != MaxOccurs::Bounded(1) {
        s.push_str(&format!(" maxOccurs=\"{}\"", o.max));
    }
    s
}

impl Writer {
    fn line(&mut self, depth: usize, text: &str) {
        for _ in 0..depth {
            self.out.push_str("  ");
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn element(&mut self, depth: usize, e: &ElementDecl, occurs: Option<Occurs>) {
        let occ = occurs.map(occurs_attrs).unwrap_or_default();
        let head = format!("<xs:element{} name=\"{}\"", occ, escape_attr(&e.name));
        match &e.type_ref {
            TypeRef::Builtin(Builtin::AnyType) => self.line(depth, &format!("{}/>", head)),
            TypeRef::Builtin(b) => self.line(depth, &format!("{} type=\"{}\"/>", head, b)),
            TypeRef::Named(n) => self.line(depth, &format!("{} type=\"{}\"/>", head, escape_attr(n))),
            TypeRef::AnonymousComplex(c) => {
                self.line(depth, &format!("{}>", head));
                self.complex_type(depth + 1, c);
                self.line(depth, "</xs:element>");
            }
            TypeRef::AnonymousSimple(s) => {
                self.line(depth, &format!("{}>", head));
                self.simple_type(depth + 1, s);
                self.line(depth, "</xs:element>");
            }
        }
    }

    fn complex_type(&mut self, depth: usize, c: &ComplexType) {
        let mut head = String::from("<xs:complexType");
        if let Some(n) = &c.name {
            head.push_str(&format!(" name=\"{}\"", escape_attr(n)));
        }
        if c.mixed {
            head.push_str(" mixed=\"true\"");
        }
        let empty = c.particles.is_empty()
            && c.attributes.is_empty()
            && c.attr_group_refs.is_empty()
            && c.derivation.is_none();
        if empty {
            self.line(depth, &format!("{}/>", head));
            return;
        }
        self.line(depth, &format!("{}>", head));
        let inner = match &c.derivation {
            Some(d) => {
                self.line(depth + 1, "<xs:complexContent>");
                self.line(
                    depth + 2,
                    &format!("<xs:{} base=\"{}\">", d.kind.keyword(), escape_attr(&d.base)),
                );
                depth + 3
            }
            None => depth + 1,
        };
        if !c.particles.is_empty() {
            self.sequence(inner, &c.particles);
        }
        self.attributes(inner, &c.attributes, &c.attr_group_refs);
        if let Some(d) = &c.derivation {
            self.line(depth + 2, &format!("</xs:{}>", d.kind.keyword()));
            self.line(depth + 1, "</xs:complexContent>");
        }
        self.line(depth, "</xs:complexType>");
    }

    fn sequence(&mut self, depth: usize, particles: &[Particle]) {
        if particles.is_empty() {
            self.line(depth, "<xs:sequence/>");
            return;
        }
        self.line(depth, "<xs:sequence>");
        for p in particles {
            match &p.term {
                ParticleTerm::Element(d) => self.element(depth + 1, d, Some(p.occurs)),
                ParticleTerm::ElementRef(n) => self.line(
                    depth + 1,
                    &format!("<xs:element{} ref=\"{}\"/>", occurs_attrs(p.occurs), escape_attr(n)),
                ),
                ParticleTerm::GroupRef(n) => self.line(
                    depth + 1,
                    &format!("<xs:group{} ref=\"{}\"/>", occurs_attrs(p.occurs), escape_attr(n)),
                ),
            }
        }
        self.line(depth, "</xs:sequence>");
    }

    fn attributes(&mut self, depth: usize, attrs: &[AttrDecl], groups: &[String]) {
        for a in attrs {
            let usage = if a.required { "required" } else { "optional" };
            let head = format!("<xs:attribute name=\"{}\" use=\"{}\"", escape_attr(&a.name), usage);
            match &a.datatype {
                SimpleRef::Builtin(Builtin::AnySimpleType) => self.line(depth, &format!("{}/>", head)),
                SimpleRef::Builtin(b) => self.line(depth, &format!("{} type=\"{}\"/>", head, b)),
                SimpleRef::Named(n) => self.line(depth, &format!("{} type=\"{}\"/>", head, escape_attr(n))),
                SimpleRef::Anonymous(s) => {
                    self.line(depth, &format!("{}>", head));
                    self.simple_type(depth + 1, s);
                    self.line(depth, "</xs:attribute>");
                }
            }
        }
        for g in groups {
            self.line(depth, &format!("<xs:attributeGroup ref=\"{}\"/>", escape_attr(g)));
        }
    }

    fn simple_type(&mut self, depth: usize, s: &SimpleType) {
        let head = match &s.name {
            Some(n) => format!("<xs:simpleType name=\"{}\">", escape_attr(n)),
            None => "<xs:simpleType>".to_string(),
        };
        self.line(depth, &head);
        self.line(depth + 1, &format!("<xs:restriction base=\"{}\"/>", s.base));
        self.line(depth, "</xs:simpleType>");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_reference_particles_like_the_bibliography_schema() {
        let model = SchemaModel {
            source_id: "t".into(),
            elements: vec![
                ElementDecl {
                    name: "bibliography".into(),
                    type_ref: TypeRef::AnonymousComplex(Box::new(ComplexType {
                        particles: vec![Particle {
                            term: ParticleTerm::ElementRef("biblioentry".into()),
                            occurs: Occurs::new(1, MaxOccurs::Unbounded),
                        }],
                        attributes: vec![AttrDecl {
                            name: "id".into(),
                            datatype: SimpleRef::Builtin(Builtin::NCName),
                            required: true,
                        }],
                        ..ComplexType::default()
                    })),
                    position: (0, 0),
                },
                ElementDecl {
                    name: "biblioentry".into(),
                    type_ref: TypeRef::AnonymousComplex(Box::default()),
                    position: (0, 0),
                },
            ],
            ..SchemaModel::default()
        };
        let text = serialize_schema(&model);
        assert_eq!(
            text,
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>
<xs:schema xmlns:xs=\"http://www.w3.org/2001/XMLSchema\" elementFormDefault=\"qualified\">
  <xs:element name=\"bibliography\">
    <xs:complexType>
      <xs:sequence>
        <xs:element maxOccurs=\"unbounded\" ref=\"biblioentry\"/>
      </xs:sequence>
      <xs:attribute name=\"id\" use=\"required\" type=\"xs:NCName\"/>
    </xs:complexType>
  </xs:element>
  <xs:element name=\"biblioentry\">
    <xs:complexType/>
  </xs:element>
</xs:schema>
"
        );
    }

    #[test]
    fn anonymous_simple_attribute_type_round_trips() {
        let src = r#"<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:complexType name="base"><xs:sequence><xs:element name="x" minOccurs="0" maxOccurs="4"><xs:simpleType><xs:restriction base="xs:int"/></xs:simpleType></xs:element></xs:sequence></xs:complexType>
  <xs:complexType name="derived" mixed="true"><xs:complexContent><xs:restriction base="base"><xs:sequence><xs:element name="x" type="xs:int"/></xs:sequence><xs:attribute name="a"><xs:simpleType><xs:restriction base="xs:token"/></xs:simpleType></xs:attribute></xs:restriction></xs:complexContent></xs:complexType>
  <xs:element name="r" type="derived"/>
  <xs:group name="g"><xs:sequence><xs:element ref="r"/></xs:sequence></xs:group>
  <xs:attributeGroup name="ag"><xs:attribute name="b" type="xs:boolean" use="required"/></xs:attributeGroup>
</xs:schema>"#;
        let m = read_schema(src.as_bytes(), "s").unwrap();
        let again = read_schema(serialize_schema(&m).as_bytes(), "s").unwrap();
        assert_eq!(m, again);
    }
}
