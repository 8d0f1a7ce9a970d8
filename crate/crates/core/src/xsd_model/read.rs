use std::collections::{HashMap, HashSet};

use crate::datatypes::{Builtin, XSD_NS};
use crate::xml_doc::{is_ncname, parse_xml, XmlElement};

use super::*;

/// Parses an XSD document into a resolved [`SchemaModel`].
///
/// XML that is not well-formed is reported with [`SchemaErrorKind::Malformed`];
/// everything else (dangling references, duplicate globals, constructs
/// outside the supported subset) carries the position of the offending
/// schema element.
pub fn read_schema(bytes: &[u8], source_id: &str) -> Result<SchemaModel, SchemaError> {
    let doc = parse_xml(bytes, source_id).map_err(|e| SchemaError {
        kind: SchemaErrorKind::Malformed,
        position: (e.line, e.column),
        message: e.message,
    })?;
    let mut reader = Reader::new(&doc.root)?;
    reader.collect_globals(&doc.root)?;
    let mut model = reader.read(&doc.root)?;
    model.source_id = source_id.to_string();
    reader.check_cycles(&model)?;
    Ok(model)
}

struct Reader {
    /// In-scope namespace bindings, innermost last. `None` is the default namespace.
    ns: Vec<Vec<(Option<String>, String)>>,
    target_ns: Option<String>,
    elements: HashSet<String>,
    complex: HashSet<String>,
    simple: HashMap<String, Builtin>,
    groups: HashSet<String>,
    attr_groups: HashSet<String>,
    positions: HashMap<(&'static str, String), (usize, usize)>,
}

enum QName {
    Xsd(String),
    Local(String),
}

fn unsupported(e: &XmlElement, what: &str) -> SchemaError {
    SchemaError::with_kind(
        SchemaErrorKind::Unsupported,
        e.position,
        format!("unsupported construct {}", what),
    )
}

fn invalid(e: &XmlElement, message: impl Into<String>) -> SchemaError {
    SchemaError::with_kind(SchemaErrorKind::Invalid, e.position, message)
}

fn unresolved(e: &XmlElement, what: &str, name: &str) -> SchemaError {
    SchemaError::with_kind(
        SchemaErrorKind::Unresolved,
        e.position,
        format!("unresolved {} reference `{}`", what, name),
    )
}

fn bindings(e: &XmlElement) -> Vec<(Option<String>, String)> {
    e.attributes
        .iter()
        .filter(|(n, _)| n.is_namespace_decl())
        .map(|(n, v)| {
            let prefix = if n.prefix.is_some() { Some(n.local.clone()) } else { None };
            (prefix, v.clone())
        })
        .collect()
}

/// Attributes that carry no meaning for this model and are skipped silently.
const IGNORED_ATTRS: &[&str] = &[
    "id",
    "elementFormDefault",
    "attributeFormDefault",
    "version",
    "blockDefault",
    "finalDefault",
    "targetNamespace",
    "abstract",
    "nillable",
    "final",
    "block",
    "form",
    "default",
    "fixed",
    "xml:lang",
];

impl Reader {
    fn new(root: &XmlElement) -> Result<Self, SchemaError> {
        let mut r = Reader {
            ns: vec![bindings(root)],
            target_ns: root.attribute("targetNamespace").map(str::to_string),
            elements: HashSet::new(),
            complex: HashSet::new(),
            simple: HashMap::new(),
            groups: HashSet::new(),
            attr_groups: HashSet::new(),
            positions: HashMap::new(),
        };
        if root.name.local != "schema" || !r.is_xsd(root) {
            return Err(invalid(root, "root element is not xs:schema in the XML Schema namespace"));
        }
        r.ns.clear();
        Ok(r)
    }

    fn resolve_prefix(&self, prefix: &Option<String>) -> Option<&str> {
        for frame in self.ns.iter().rev() {
            if let Some((_, uri)) = frame.iter().find(|(p, _)| p == prefix) {
                return Some(uri.as_str());
            }
        }
        None
    }

    fn is_xsd(&self, e: &XmlElement) -> bool {
        self.resolve_prefix(&e.name.prefix) == Some(XSD_NS)
    }

    fn qname(&self, e: &XmlElement, raw: &str) -> Result<QName, SchemaError> {
        let raw = raw.trim();
        let (prefix, local) = match raw.split_once(':') {
            Some((p, l)) => (Some(p.to_string()), l),
            None => (None, raw),
        };
        if !is_ncname(local) || prefix.as_deref().is_some_and(|p| !is_ncname(p)) {
            return Err(invalid(e, format!("`{}` is not a valid QName", raw)));
        }
        let uri = self.resolve_prefix(&prefix);
        match (uri, &prefix) {
            (Some(XSD_NS), _) => {
                // An unprefixed name under a default XSD namespace may still
                // mean a schema-local component when it is not a built-in.
                if prefix.is_none() && Builtin::from_local_name(local).is_none() {
                    Ok(QName::Local(local.to_string()))
                } else {
                    Ok(QName::Xsd(local.to_string()))
                }
            }
            (Some(u), _) if Some(u) == self.target_ns.as_deref() => Ok(QName::Local(local.to_string())),
            (None, None) => Ok(QName::Local(local.to_string())),
            (None, Some(p)) => Err(invalid(e, format!("undeclared namespace prefix `{}`", p))),
            (Some(u), _) => Err(unsupported(e, &format!("reference into foreign namespace `{}`", u))),
        }
    }

    fn builtin(&self, e: &XmlElement, local: &str) -> Result<Builtin, SchemaError> {
        Builtin::from_local_name(local).ok_or_else(|| unsupported(e, &format!("built-in type xs:{}", local)))
    }

    fn check_attrs(&self, e: &XmlElement, allowed: &[&str]) -> Result<(), SchemaError> {
        for (n, _) in &e.attributes {
            if n.is_namespace_decl() {
                continue;
            }
            let full = n.to_string();
            if n.prefix.is_some() && full != "xml:lang" {
                continue;
            }
            if allowed.contains(&full.as_str()) || IGNORED_ATTRS.contains(&full.as_str()) {
                continue;
            }
            let what = match full.as_str() {
                "substitutionGroup" => "substitutionGroup".to_string(),
                other => format!("attribute `{}` on xs:{}", other, e.name.local),
            };
            return Err(unsupported(e, &what));
        }
        Ok(())
    }

    fn name_attr(&self, e: &XmlElement) -> Result<String, SchemaError> {
        let name = e
            .attribute("name")
            .ok_or_else(|| invalid(e, format!("xs:{} requires a name", e.name.local)))?;
        if !is_ncname(name) {
            return Err(invalid(e, format!("`{}` is not an NCName", name)));
        }
        Ok(name.to_string())
    }

    /// Schema-namespace children, skipping annotations. Foreign elements are rejected.
    fn children<'e>(&mut self, e: &'e XmlElement) -> Result<Vec<&'e XmlElement>, SchemaError> {
        let mut out = Vec::new();
        for c in e.child_elements() {
            self.ns.push(bindings(c));
            let xsd = self.is_xsd(c);
            self.ns.pop();
            if !xsd {
                return Err(unsupported(c, &format!("foreign element `{}`", c.name)));
            }
            if c.name.local != "annotation" {
                out.push(c);
            }
        }
        if let Some(t) = e.text_runs().next() {
            return Err(invalid(e, format!("unexpected text `{}`", t.trim())));
        }
        Ok(out)
    }

    fn collect_globals(&mut self, root: &XmlElement) -> Result<(), SchemaError> {
        self.ns.push(bindings(root));
        let children = self.children(root)?;
        for c in children {
            let space = match c.name.local.as_str() {
                "element" => "element",
                "complexType" | "simpleType" => "type",
                "group" => "group",
                "attributeGroup" => "attributeGroup",
                _ => continue,
            };
            let name = self.name_attr(c)?;
            if self.positions.insert((space, name.clone()), c.position).is_some() {
                return Err(SchemaError::with_kind(
                    SchemaErrorKind::Duplicate,
                    c.position,
                    format!("duplicate global {} `{}`", space, name),
                ));
            }
            match c.name.local.as_str() {
                "element" => {
                    self.elements.insert(name);
                }
                "complexType" => {
                    self.complex.insert(name);
                }
                "simpleType" => {
                    self.ns.push(bindings(c));
                    let st = self.simple_type(c, Some(name.clone()));
                    self.ns.pop();
                    self.simple.insert(name, st?.base);
                }
                "group" => {
                    self.groups.insert(name);
                }
                _ => {
                    self.attr_groups.insert(name);
                }
            }
        }
        self.ns.pop();
        Ok(())
    }

    fn read(&mut self, root: &XmlElement) -> Result<SchemaModel, SchemaError> {
        self.ns.push(bindings(root));
        let mut model = SchemaModel::default();
        for c in self.children(root)? {
            self.ns.push(bindings(c));
            match c.name.local.as_str() {
                "element" => {
                    self.check_attrs(c, &["name", "type"])?;
                    let decl = self.element_decl(c)?;
                    model.elements.push(decl);
                }
                "complexType" => {
                    let name = self.name_attr(c)?;
                    let ct = self.complex_type(c, Some(name))?;
                    model.types.push(GlobalType::Complex(ct));
                }
                "simpleType" => {
                    let name = self.name_attr(c)?;
                    let st = self.simple_type(c, Some(name))?;
                    model.types.push(GlobalType::Simple(st));
                }
                "group" => {
                    self.check_attrs(c, &["name"])?;
                    let name = self.name_attr(c)?;
                    let mut particles = Vec::new();
                    for g in self.children(c)? {
                        match g.name.local.as_str() {
                            "sequence" => {
                                self.ns.push(bindings(g));
                                particles = self.sequence(g)?;
                                self.ns.pop();
                            }
                            other => return Err(unsupported(g, &format!("xs:{}", other))),
                        }
                    }
                    model.groups.push(GroupDecl { name, particles });
                }
                "attributeGroup" => {
                    self.check_attrs(c, &["name"])?;
                    let name = self.name_attr(c)?;
                    let mut attributes = Vec::new();
                    let mut attr_group_refs = Vec::new();
                    let members = self.children(c)?;
                    self.attribute_uses(c, &members, &mut attributes, &mut attr_group_refs)?;
                    model.attribute_groups.push(AttrGroupDecl {
                        name,
                        attributes,
                        attr_group_refs,
                    });
                }
                other => return Err(unsupported(c, &format!("xs:{}", other))),
            }
            self.ns.pop();
        }
        self.ns.pop();
        Ok(model)
    }

    /// Element declaration body shared by global and local declarations.
    fn element_decl(&mut self, e: &XmlElement) -> Result<ElementDecl, SchemaError> {
        let name = self.name_attr(e)?;
        let mut inline = None;
        for c in self.children(e)? {
            if inline.is_some() {
                return Err(invalid(c, format!("element `{}` has more than one inline type", name)));
            }
            self.ns.push(bindings(c));
            inline = Some(match c.name.local.as_str() {
                "complexType" => {
                    if c.attribute("name").is_some() {
                        return Err(invalid(c, "an inline complexType cannot be named"));
                    }
                    TypeRef::AnonymousComplex(Box::new(self.complex_type(c, None)?))
                }
                "simpleType" => {
                    if c.attribute("name").is_some() {
                        return Err(invalid(c, "an inline simpleType cannot be named"));
                    }
                    TypeRef::AnonymousSimple(self.simple_type(c, None)?)
                }
                other => return Err(unsupported(c, &format!("xs:{}", other))),
            });
            self.ns.pop();
        }
        let type_ref = match (e.attribute("type"), inline) {
            (Some(_), Some(_)) => {
                return Err(invalid(e, format!("element `{}` has both a type attribute and an inline type", name)))
            }
            (Some(t), None) => match self.qname(e, t)? {
                QName::Xsd(local) => TypeRef::Builtin(self.builtin(e, &local)?),
                QName::Local(local) => {
                    if self.complex.contains(&local) || self.simple.contains_key(&local) {
                        TypeRef::Named(local)
                    } else {
                        return Err(unresolved(e, "type", &local));
                    }
                }
            },
            (None, Some(t)) => t,
            (None, None) => TypeRef::Builtin(Builtin::AnyType),
        };
        Ok(ElementDecl {
            name,
            type_ref,
            position: e.position,
        })
    }

    fn occurs(&self, e: &XmlElement) -> Result<Occurs, SchemaError> {
        let min = match e.attribute("minOccurs") {
            Some(v) => v
                .trim()
                .parse::<u32>()
                .map_err(|_| invalid(e, format!("invalid minOccurs `{}`", v)))?,
            None => 1,
        };
        let max = match e.attribute("maxOccurs").map(str::trim) {
            Some("unbounded") => MaxOccurs::Unbounded,
            Some(v) => MaxOccurs::Bounded(
                v.parse::<u32>()
                    .map_err(|_| invalid(e, format!("invalid maxOccurs `{}`", v)))?,
            ),
            None => MaxOccurs::Bounded(1),
        };
        if let MaxOccurs::Bounded(m) = max {
            if m < min {
                return Err(invalid(e, format!("maxOccurs {} is less than minOccurs {}", m, min)));
            }
        }
        Ok(Occurs { min, max })
    }

    fn sequence(&mut self, seq: &XmlElement) -> Result<Vec<Particle>, SchemaError> {
        self.check_attrs(seq, &["minOccurs", "maxOccurs"])?;
        if self.occurs(seq)? != Occurs::ONCE {
            return Err(unsupported(seq, "occurrence facets on xs:sequence"));
        }
        let mut out = Vec::new();
        for c in self.children(seq)? {
            self.ns.push(bindings(c));
            let particle = match c.name.local.as_str() {
                "element" => self.element_particle(c)?,
                "group" => self.group_ref(c)?,
                other => return Err(unsupported(c, &format!("xs:{}", other))),
            };
            self.ns.pop();
            out.push(particle);
        }
        Ok(out)
    }

    fn element_particle(&mut self, e: &XmlElement) -> Result<Particle, SchemaError> {
        let occurs = self.occurs(e)?;
        if let Some(r) = e.attribute("ref") {
            self.check_attrs(e, &["ref", "minOccurs", "maxOccurs"])?;
            if !self.children(e)?.is_empty() {
                return Err(invalid(e, "an element reference cannot declare a type"));
            }
            let name = match self.qname(e, r)? {
                QName::Local(n) => n,
                QName::Xsd(n) => return Err(unresolved(e, "element", &n)),
            };
            if !self.elements.contains(&name) {
                return Err(unresolved(e, "element", &name));
            }
            return Ok(Particle {
                term: ParticleTerm::ElementRef(name),
                occurs,
            });
        }
        self.check_attrs(e, &["name", "type", "minOccurs", "maxOccurs"])?;
        Ok(Particle {
            term: ParticleTerm::Element(self.element_decl(e)?),
            occurs,
        })
    }

    fn group_ref(&mut self, e: &XmlElement) -> Result<Particle, SchemaError> {
        self.check_attrs(e, &["ref", "minOccurs", "maxOccurs"])?;
        let r = e
            .attribute("ref")
            .ok_or_else(|| invalid(e, "a local xs:group must be a reference"))?;
        let name = match self.qname(e, r)? {
            QName::Local(n) => n,
            QName::Xsd(n) => return Err(unresolved(e, "group", &n)),
        };
        if !self.groups.contains(&name) {
            return Err(unresolved(e, "group", &name));
        }
        Ok(Particle {
            term: ParticleTerm::GroupRef(name),
            occurs: self.occurs(e)?,
        })
    }

    fn mixed_flag(&self, e: &XmlElement) -> Result<bool, SchemaError> {
        match e.attribute("mixed").map(str::trim) {
            None | Some("false") | Some("0") => Ok(false),
            Some("true") | Some("1") => Ok(true),
            Some(v) => Err(invalid(e, format!("invalid mixed value `{}`", v))),
        }
    }

    fn complex_type(&mut self, e: &XmlElement, name: Option<String>) -> Result<ComplexType, SchemaError> {
        self.check_attrs(e, &["name", "mixed"])?;
        let mut ct = ComplexType {
            name,
            mixed: self.mixed_flag(e)?,
            ..ComplexType::default()
        };
        let children = self.children(e)?;
        let mut rest: &[&XmlElement] = &children;
        if let Some(first) = children.first() {
            self.ns.push(bindings(first));
            let consumed = match first.name.local.as_str() {
                "sequence" => {
                    ct.particles = self.sequence(first)?;
                    true
                }
                "group" => {
                    ct.particles = vec![self.group_ref(first)?];
                    true
                }
                "complexContent" => {
                    self.complex_content(first, &mut ct)?;
                    true
                }
                "simpleContent" | "choice" | "all" => {
                    return Err(unsupported(first, &format!("xs:{}", first.name.local)))
                }
                _ => false,
            };
            self.ns.pop();
            if consumed {
                rest = &children[1..];
            }
        }
        if ct.derivation.is_some() && !rest.is_empty() {
            return Err(invalid(rest[0], "attributes must be declared inside xs:complexContent"));
        }
        let (mut attrs, mut groups) = (Vec::new(), Vec::new());
        self.attribute_uses(e, rest, &mut attrs, &mut groups)?;
        ct.attributes.extend(attrs);
        ct.attr_group_refs.extend(groups);
        Ok(ct)
    }

    fn complex_content(&mut self, cc: &XmlElement, ct: &mut ComplexType) -> Result<(), SchemaError> {
        self.check_attrs(cc, &["mixed"])?;
        if self.mixed_flag(cc)? {
            ct.mixed = true;
        }
        let children = self.children(cc)?;
        let [d] = children.as_slice() else {
            return Err(invalid(cc, "xs:complexContent needs exactly one xs:extension or xs:restriction"));
        };
        self.ns.push(bindings(d));
        let kind = match d.name.local.as_str() {
            "extension" => DerivationKind::Extension,
            "restriction" => DerivationKind::Restriction,
            other => return Err(unsupported(d, &format!("xs:{}", other))),
        };
        self.check_attrs(d, &["base"])?;
        let base_raw = d
            .attribute("base")
            .ok_or_else(|| invalid(d, format!("xs:{} requires a base", kind.keyword())))?;
        let base = match self.qname(d, base_raw)? {
            QName::Xsd(n) if n == "anyType" => {
                return Err(unsupported(d, "derivation from xs:anyType"));
            }
            QName::Xsd(n) => return Err(unresolved(d, "complex type", &n)),
            QName::Local(n) => n,
        };
        if !self.complex.contains(&base) {
            return Err(unresolved(d, "complex type", &base));
        }
        ct.derivation = Some(Derivation { kind, base });
        let inner = self.children(d)?;
        let mut rest: &[&XmlElement] = &inner;
        if let Some(first) = inner.first() {
            self.ns.push(bindings(first));
            let consumed = match first.name.local.as_str() {
                "sequence" => {
                    ct.particles = self.sequence(first)?;
                    true
                }
                "group" => {
                    ct.particles = vec![self.group_ref(first)?];
                    true
                }
                "choice" | "all" => return Err(unsupported(first, &format!("xs:{}", first.name.local))),
                _ => false,
            };
            self.ns.pop();
            if consumed {
                rest = &inner[1..];
            }
        }
        self.attribute_uses(d, rest, &mut ct.attributes, &mut ct.attr_group_refs)?;
        self.ns.pop();
        Ok(())
    }

    fn attribute_uses(
        &mut self,
        _parent: &XmlElement,
        children: &[&XmlElement],
        attrs: &mut Vec<AttrDecl>,
        groups: &mut Vec<String>,
    ) -> Result<(), SchemaError> {
        for c in children {
            self.ns.push(bindings(c));
            match c.name.local.as_str() {
                "attribute" => {
                    if let Some(a) = self.attribute(c)? {
                        if attrs.iter().any(|x| x.name == a.name) {
                            return Err(invalid(c, format!("duplicate attribute `{}`", a.name)));
                        }
                        attrs.push(a);
                    }
                }
                "attributeGroup" => {
                    self.check_attrs(c, &["ref"])?;
                    let r = c
                        .attribute("ref")
                        .ok_or_else(|| invalid(c, "a local xs:attributeGroup must be a reference"))?;
                    let name = match self.qname(c, r)? {
                        QName::Local(n) => n,
                        QName::Xsd(n) => return Err(unresolved(c, "attribute group", &n)),
                    };
                    if !self.attr_groups.contains(&name) {
                        return Err(unresolved(c, "attribute group", &name));
                    }
                    groups.push(name);
                }
                other => {
                    let what = match other {
                        "sequence" | "group" | "complexContent" => format!("misplaced xs:{}", other),
                        _ => format!("xs:{}", other),
                    };
                    return Err(if what.starts_with("misplaced") {
                        invalid(c, what)
                    } else {
                        unsupported(c, &what)
                    });
                }
            }
            self.ns.pop();
        }
        Ok(())
    }

    fn attribute(&mut self, e: &XmlElement) -> Result<Option<AttrDecl>, SchemaError> {
        if e.attribute("ref").is_some() {
            return Err(unsupported(e, "attribute reference (global attributes)"));
        }
        self.check_attrs(e, &["name", "type", "use"])?;
        let name = self.name_attr(e)?;
        let required = match e.attribute("use").map(str::trim) {
            None | Some("optional") => false,
            Some("required") => true,
            Some("prohibited") => return Ok(None),
            Some(v) => return Err(invalid(e, format!("invalid use `{}`", v))),
        };
        let mut inline = None;
        for c in self.children(e)? {
            if c.name.local != "simpleType" || inline.is_some() {
                return Err(unsupported(c, &format!("xs:{} inside xs:attribute", c.name.local)));
            }
            self.ns.push(bindings(c));
            inline = Some(self.simple_type(c, None)?);
            self.ns.pop();
        }
        let datatype = match (e.attribute("type"), inline) {
            (Some(_), Some(_)) => {
                return Err(invalid(e, format!("attribute `{}` has both a type attribute and an inline type", name)))
            }
            (Some(t), None) => match self.qname(e, t)? {
                QName::Xsd(local) => {
                    let b = self.builtin(e, &local)?;
                    if b == Builtin::AnyType {
                        return Err(invalid(e, "attributes cannot have type xs:anyType"));
                    }
                    SimpleRef::Builtin(b)
                }
                QName::Local(local) => {
                    if self.simple.contains_key(&local) {
                        SimpleRef::Named(local)
                    } else {
                        return Err(unresolved(e, "simple type", &local));
                    }
                }
            },
            (None, Some(s)) => SimpleRef::Anonymous(s),
            (None, None) => SimpleRef::Builtin(Builtin::AnySimpleType),
        };
        Ok(Some(AttrDecl {
            name,
            datatype,
            required,
        }))
    }

    fn simple_type(&mut self, e: &XmlElement, name: Option<String>) -> Result<SimpleType, SchemaError> {
        self.check_attrs(e, &["name"])?;
        let children = self.children(e)?;
        let [r] = children.as_slice() else {
            return Err(invalid(e, "xs:simpleType needs exactly one xs:restriction"));
        };
        if r.name.local != "restriction" {
            return Err(unsupported(r, &format!("xs:{}", r.name.local)));
        }
        self.ns.push(bindings(r));
        self.check_attrs(r, &["base"])?;
        let raw = r
            .attribute("base")
            .ok_or_else(|| invalid(r, "xs:restriction requires a base"))?;
        let base = match self.qname(r, raw)? {
            QName::Xsd(local) => self.builtin(r, &local)?,
            QName::Local(local) => match self.simple.get(&local) {
                Some(b) => *b,
                None => return Err(invalid(r, format!("simple type base `{}` must be a built-in type", local))),
            },
        };
        if base == Builtin::AnyType {
            return Err(invalid(r, "a simple type cannot restrict xs:anyType"));
        }
        for facet in self.children(r)? {
            if facet.name.local == "simpleType" {
                return Err(unsupported(facet, "nested xs:simpleType"));
            }
        }
        self.ns.pop();
        Ok(SimpleType { name, base })
    }

    fn check_cycles(&self, model: &SchemaModel) -> Result<(), SchemaError> {
        for t in &model.types {
            let GlobalType::Complex(ct) = t else { continue };
            let mut seen = HashSet::new();
            let mut cur = ct;
            while let Some(d) = &cur.derivation {
                if !seen.insert(d.base.clone()) || d.base == ct.name.as_deref().unwrap_or_default() {
                    let pos = self.positions[&("type", t.name().to_string())];
                    return Err(SchemaError::with_kind(
                        SchemaErrorKind::Invalid,
                        pos,
                        format!("circular derivation through `{}`", d.base),
                    ));
                }
                match model.complex_type(&d.base) {
                    Some(b) => cur = b,
                    None => break,
                }
            }
        }
        for g in &model.groups {
            if group_reaches(model, &g.name, &g.particles, &mut HashSet::new()) {
                return Err(SchemaError::with_kind(
                    SchemaErrorKind::Invalid,
                    self.positions[&("group", g.name.clone())],
                    format!("group `{}` contains itself", g.name),
                ));
            }
        }
        for g in &model.attribute_groups {
            let mut stack: Vec<&str> = g.attr_group_refs.iter().map(String::as_str).collect();
            let mut seen = HashSet::new();
            while let Some(n) = stack.pop() {
                if n == g.name {
                    return Err(SchemaError::with_kind(
                        SchemaErrorKind::Invalid,
                        self.positions[&("attributeGroup", g.name.clone())],
                        format!("attribute group `{}` contains itself", g.name),
                    ));
                }
                if seen.insert(n) {
                    if let Some(inner) = model.attribute_group(n) {
                        stack.extend(inner.attr_group_refs.iter().map(String::as_str));
                    }
                }
            }
        }
        Ok(())
    }
}

/// True when `target` group is reachable by group references (through
/// local anonymous types too, which would make the expansion infinite only
/// via groups; references through named elements terminate).
fn group_reaches<'m>(
    model: &'m SchemaModel,
    target: &str,
    particles: &'m [Particle],
    seen: &mut HashSet<&'m str>,
) -> bool {
    for p in particles {
        if let ParticleTerm::GroupRef(g) = &p.term {
            if g == target {
                return true;
            }
            if seen.insert(g) {
                if let Some(inner) = model.group(g) {
                    if group_reaches(model, target, &inner.particles, seen) {
                        return true;
                    }
                }
            }
        }
    }
    false
}
