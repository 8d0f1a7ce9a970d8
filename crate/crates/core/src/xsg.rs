//! XML Schema Graph: one vertex per element, attribute, non-primitive type,
//! element group and attribute group declaration; edges from elements (and
//! attributes) to their non-primitive types and from types and groups to
//! their members. Salami-slice and russian-doll schemas for the same
//! structure produce isomorphic graphs.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::datatypes::Builtin;
use crate::xsd_model::{
    AttrDecl, ComplexType, DerivationKind, ElementDecl, GlobalType, Occurs, Particle, ParticleTerm, SchemaModel,
    SimpleRef, SimpleType, TypeRef,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    Element,
    Attribute,
    ComplexType,
    SimpleType,
    ElementGroup,
    AttributeGroup,
}

impl VertexKind {
    pub fn is_type(self) -> bool {
        matches!(self, VertexKind::ComplexType | VertexKind::SimpleType)
    }

    /// Kinds that become OWL classes.
    pub fn is_class_source(self) -> bool {
        matches!(
            self,
            VertexKind::ComplexType | VertexKind::ElementGroup | VertexKind::AttributeGroup
        )
    }

    fn shape(self) -> &'static str {
        match self {
            VertexKind::Element => "ellipse",
            VertexKind::Attribute => "diamond",
            VertexKind::ComplexType | VertexKind::SimpleType => "box",
            VertexKind::ElementGroup | VertexKind::AttributeGroup => "hexagon",
        }
    }
}

/// Value space of a simple-typed element or attribute.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ValueType {
    Builtin(Builtin),
    /// A schema-defined simple type restricting `base`.
    Defined { base: Builtin },
}

impl ValueType {
    pub fn base(&self) -> Builtin {
        match self {
            ValueType::Builtin(b) => *b,
            ValueType::Defined { base } => *base,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XsgVertex {
    pub id: usize,
    pub kind: VertexKind,
    /// Declared name; anonymous types get `<surrounding name>_type`.
    pub label: String,
    /// Location of the declaration in the schema document.
    pub schema_path: String,
    pub global: bool,
    /// Surrounding element or attribute of an anonymous type.
    pub owner: Option<usize>,
    /// Set on elements and attributes with simple content.
    pub value_type: Option<ValueType>,
    /// Complex types only.
    pub mixed: bool,
}

impl XsgVertex {
    pub fn is_anonymous(&self) -> bool {
        self.owner.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    ElementToType,
    TypeToMember,
    /// Derived complex type to its base type.
    Derivation(DerivationKind),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XsgEdge {
    pub id: usize,
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
    /// Clamped particle facets for member elements and groups; attribute
    /// members carry 0..1 or 1..1 from `use`.
    pub occurs: Option<Occurs>,
    /// Location of the particle or attribute use inside the container.
    pub schema_path: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaGraph {
    pub vertices: Vec<XsgVertex>,
    pub edges: Vec<XsgEdge>,
    pub roots: Vec<usize>,
    /// Edge ids that close a cycle in depth-first order.
    pub back_edges: Vec<usize>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XsgError {
    #[error("schema `{0}` declares no global element")]
    EmptySchema(String),
}

impl SchemaGraph {
    pub fn vertex(&self, id: usize) -> &XsgVertex {
        &self.vertices[id]
    }

    pub fn outgoing(&self, id: usize) -> impl Iterator<Item = &XsgEdge> {
        self.edges.iter().filter(move |e| e.from == id)
    }

    pub fn in_degree(&self, id: usize) -> usize {
        self.edges.iter().filter(|e| e.to == id).count()
    }

    pub fn is_back_edge(&self, edge: usize) -> bool {
        self.back_edges.contains(&edge)
    }

    /// Target of the element's or attribute's `ElementToType` edge.
    pub fn type_of(&self, id: usize) -> Option<usize> {
        self.outgoing(id).find(|e| e.kind == EdgeKind::ElementToType).map(|e| e.to)
    }

    pub fn base_of(&self, id: usize) -> Option<(DerivationKind, usize)> {
        self.outgoing(id).find_map(|e| match e.kind {
            EdgeKind::Derivation(k) => Some((k, e.to)),
            _ => None,
        })
    }

    /// True when the graph with back edges removed has a cycle. Always false
    /// for graphs returned by [`build_xsg`].
    pub fn has_forward_cycle(&self) -> bool {
        let n = self.vertices.len();
        let mut indegree = vec![0usize; n];
        let forward: Vec<&XsgEdge> = self.edges.iter().filter(|e| !self.is_back_edge(e.id)).collect();
        for e in &forward {
            indegree[e.to] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for e in forward.iter().filter(|e| e.from == v) {
                indegree[e.to] -= 1;
                if indegree[e.to] == 0 {
                    queue.push(e.to);
                }
            }
        }
        seen != n
    }
}

pub fn build_xsg(schema: &SchemaModel) -> Result<SchemaGraph, XsgError> {
    if schema.elements.is_empty() {
        return Err(XsgError::EmptySchema(schema.source_id.clone()));
    }
    let mut b = Builder {
        schema,
        g: SchemaGraph {
            vertices: Vec::new(),
            edges: Vec::new(),
            roots: Vec::new(),
            back_edges: Vec::new(),
            warnings: Vec::new(),
        },
        global_elements: HashMap::new(),
        global_types: HashMap::new(),
        groups: HashMap::new(),
        attr_groups: HashMap::new(),
    };

    for e in &schema.elements {
        let id = b.vertex(VertexKind::Element, &e.name, format!("/xs:schema/xs:element[{}]", e.name), true, None);
        b.global_elements.insert(e.name.as_str(), id);
    }
    for t in &schema.types {
        let (kind, keyword) = match t {
            GlobalType::Complex(_) => (VertexKind::ComplexType, "complexType"),
            GlobalType::Simple(_) => (VertexKind::SimpleType, "simpleType"),
        };
        let id = b.vertex(kind, t.name(), format!("/xs:schema/xs:{}[{}]", keyword, t.name()), true, None);
        b.global_types.insert(t.name(), id);
    }
    for g in &schema.groups {
        let id = b.vertex(VertexKind::ElementGroup, &g.name, format!("/xs:schema/xs:group[{}]", g.name), true, None);
        b.groups.insert(g.name.as_str(), id);
    }
    for g in &schema.attribute_groups {
        let id = b.vertex(
            VertexKind::AttributeGroup,
            &g.name,
            format!("/xs:schema/xs:attributeGroup[{}]", g.name),
            true,
            None,
        );
        b.attr_groups.insert(g.name.as_str(), id);
    }

    for e in &schema.elements {
        let id = b.global_elements[e.name.as_str()];
        b.element_type(id, e);
    }
    for t in &schema.types {
        let id = b.global_types[t.name()];
        match t {
            GlobalType::Complex(c) => b.complex_contents(id, c),
            GlobalType::Simple(s) => b.g.vertices[id].value_type = Some(ValueType::Defined { base: s.base }),
        }
    }
    for g in &schema.groups {
        let id = b.groups[g.name.as_str()];
        let path = format!("{}/xs:sequence", b.g.vertices[id].schema_path);
        b.particles(id, &path, &g.particles);
    }
    for g in &schema.attribute_groups {
        let id = b.attr_groups[g.name.as_str()];
        let path = b.g.vertices[id].schema_path.clone();
        b.attributes(id, &path, &g.attributes, &g.attr_group_refs);
    }

    let mut g = b.g;
    find_roots_and_back_edges(&mut g);
    Ok(g)
}

struct Builder<'a> {
    schema: &'a SchemaModel,
    g: SchemaGraph,
    global_elements: HashMap<&'a str, usize>,
    global_types: HashMap<&'a str, usize>,
    groups: HashMap<&'a str, usize>,
    attr_groups: HashMap<&'a str, usize>,
}

impl<'a> Builder<'a> {
    fn vertex(&mut self, kind: VertexKind, label: &str, path: String, global: bool, owner: Option<usize>) -> usize {
        let id = self.g.vertices.len();
        self.g.vertices.push(XsgVertex {
            id,
            kind,
            label: label.to_string(),
            schema_path: path,
            global,
            owner,
            value_type: None,
            mixed: false,
        });
        id
    }

    fn edge(&mut self, from: usize, to: usize, kind: EdgeKind, occurs: Option<Occurs>, path: String) {
        let id = self.g.edges.len();
        self.g.edges.push(XsgEdge {
            id,
            from,
            to,
            kind,
            occurs,
            schema_path: path,
        });
    }

    fn named_type(&self, name: &str) -> usize {
        // The reader resolves every type reference before we get here.
        self.global_types[name]
    }

    fn element_type(&mut self, id: usize, decl: &'a ElementDecl) {
        let path = self.g.vertices[id].schema_path.clone();
        match &decl.type_ref {
            TypeRef::Builtin(b) => self.g.vertices[id].value_type = Some(ValueType::Builtin(*b)),
            TypeRef::Named(n) => {
                let t = self.named_type(n);
                if let Some(GlobalType::Simple(s)) = self.schema.global_type(n) {
                    self.g.vertices[id].value_type = Some(ValueType::Defined { base: s.base });
                }
                self.edge(id, t, EdgeKind::ElementToType, None, path);
            }
            TypeRef::AnonymousComplex(c) => {
                let t = self.vertex(
                    VertexKind::ComplexType,
                    &format!("{}_type", decl.name),
                    format!("{}/xs:complexType", path),
                    false,
                    Some(id),
                );
                self.edge(id, t, EdgeKind::ElementToType, None, path);
                self.complex_contents(t, c);
            }
            TypeRef::AnonymousSimple(s) => self.anonymous_simple(id, &decl.name, &path, s),
        }
    }

    fn anonymous_simple(&mut self, owner: usize, name: &str, path: &str, s: &SimpleType) {
        let t = self.vertex(
            VertexKind::SimpleType,
            &format!("{}_type", name),
            format!("{}/xs:simpleType", path),
            false,
            Some(owner),
        );
        self.g.vertices[t].value_type = Some(ValueType::Defined { base: s.base });
        self.g.vertices[owner].value_type = Some(ValueType::Defined { base: s.base });
        self.edge(owner, t, EdgeKind::ElementToType, None, path.to_string());
    }

    fn complex_contents(&mut self, id: usize, c: &'a ComplexType) {
        self.g.vertices[id].mixed = c.mixed;
        let mut path = self.g.vertices[id].schema_path.clone();
        if let Some(d) = &c.derivation {
            let base = self.named_type(&d.base);
            self.edge(id, base, EdgeKind::Derivation(d.kind), None, path.clone());
            path = format!("{}/xs:complexContent/xs:{}", path, d.kind.keyword());
        }
        let seq = format!("{}/xs:sequence", path);
        self.particles(id, &seq, &c.particles);
        self.attributes(id, &path, &c.attributes, &c.attr_group_refs);
    }

    fn particles(&mut self, container: usize, path: &str, particles: &'a [Particle]) {
        for p in particles {
            let occurs = Some(p.occurs.clamped());
            match &p.term {
                ParticleTerm::Element(d) => {
                    let epath = format!("{}/xs:element[{}]", path, d.name);
                    let e = self.vertex(VertexKind::Element, &d.name, epath.clone(), false, None);
                    self.edge(container, e, EdgeKind::TypeToMember, occurs, epath);
                    self.element_type(e, d);
                }
                ParticleTerm::ElementRef(n) => {
                    let e = self.global_elements[n.as_str()];
                    self.edge(container, e, EdgeKind::TypeToMember, occurs, format!("{}/xs:element[{}]", path, n));
                }
                ParticleTerm::GroupRef(n) => {
                    let gv = self.groups[n.as_str()];
                    self.edge(container, gv, EdgeKind::TypeToMember, occurs, format!("{}/xs:group[{}]", path, n));
                }
            }
        }
    }

    fn attributes(&mut self, container: usize, path: &str, attrs: &'a [AttrDecl], groups: &'a [String]) {
        for a in attrs {
            let apath = format!("{}/xs:attribute[{}]", path, a.name);
            let v = self.vertex(VertexKind::Attribute, &a.name, apath.clone(), false, None);
            let occurs = Occurs::new(u32::from(a.required), crate::xsd_model::MaxOccurs::Bounded(1));
            self.edge(container, v, EdgeKind::TypeToMember, Some(occurs), apath.clone());
            match &a.datatype {
                SimpleRef::Builtin(b) => self.g.vertices[v].value_type = Some(ValueType::Builtin(*b)),
                SimpleRef::Named(n) => {
                    let t = self.named_type(n);
                    let base = self.schema.simple_type(n).map(|s| s.base).unwrap_or(Builtin::AnySimpleType);
                    self.g.vertices[v].value_type = Some(ValueType::Defined { base });
                    self.edge(v, t, EdgeKind::ElementToType, None, apath);
                }
                SimpleRef::Anonymous(s) => self.anonymous_simple(v, &a.name, &apath, s),
            }
        }
        for n in groups {
            let gv = self.attr_groups[n.as_str()];
            self.edge(
                container,
                gv,
                EdgeKind::TypeToMember,
                None,
                format!("{}/xs:attributeGroup[{}]", path, n),
            );
        }
    }
}

/// Roots are the global elements nobody references. Vertices still
/// unreached afterwards (recursive roots, unused global types) become extra
/// roots in id order. Back edges are found by DFS from the roots in order.
fn find_roots_and_back_edges(g: &mut SchemaGraph) {
    let n = g.vertices.len();
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut referenced = vec![false; n];
    for e in &g.edges {
        adjacency[e.from].push((e.id, e.to));
        if e.kind == EdgeKind::TypeToMember {
            referenced[e.to] = true;
        }
    }
    let mut roots: Vec<usize> = g
        .vertices
        .iter()
        .filter(|v| v.kind == VertexKind::Element && v.global && !referenced[v.id])
        .map(|v| v.id)
        .collect();

    // 0 = unvisited, 1 = on stack, 2 = done
    let mut color = vec![0u8; n];
    let mut back = Vec::new();
    let dfs = |start: usize, color: &mut Vec<u8>, back: &mut Vec<usize>| {
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        color[start] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&(eid, to)) = adjacency[v].get(*next) {
                *next += 1;
                match color[to] {
                    0 => {
                        color[to] = 1;
                        stack.push((to, 0));
                    }
                    1 => back.push(eid),
                    _ => {}
                }
            } else {
                color[v] = 2;
                stack.pop();
            }
        }
    };
    for &r in &roots {
        dfs(r, &mut color, &mut back);
    }
    let initial = roots.len();
    // Prefer global elements, then other globals, then anything left.
    let order: Vec<usize> = {
        let mut ids: Vec<usize> = (0..n).collect();
        ids.sort_by_key(|&i| {
            let v = &g.vertices[i];
            (v.kind != VertexKind::Element || !v.global, !v.global, i)
        });
        ids
    };
    for v in order {
        if color[v] == 0 {
            roots.push(v);
            dfs(v, &mut color, &mut back);
        }
    }
    if initial == 0 {
        g.warnings.push(format!(
            "every global element is referenced; using `{}` as root",
            g.vertices[roots[0]].label
        ));
    }
    if roots.len() > 1 {
        let names: Vec<&str> = roots.iter().map(|&r| g.vertices[r].label.as_str()).collect();
        g.warnings.push(format!("schema graph has {} roots: {}", roots.len(), names.join(", ")));
    }
    back.sort_unstable();
    g.roots = roots;
    g.back_edges = back;
}

/// True iff there are no back edges, exactly one root, and every other
/// vertex has exactly one parent.
pub fn is_tree(g: &SchemaGraph) -> bool {
    if !g.back_edges.is_empty() || g.roots.len() != 1 {
        return false;
    }
    let mut indegree = vec![0usize; g.vertices.len()];
    for e in &g.edges {
        indegree[e.to] += 1;
    }
    g.vertices
        .iter()
        .all(|v| indegree[v.id] == usize::from(v.id != g.roots[0]))
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn occurs_label(o: Occurs) -> String {
    let max = match o.max {
        crate::xsd_model::MaxOccurs::Unbounded => "*".to_string(),
        crate::xsd_model::MaxOccurs::Bounded(n) => n.to_string(),
    };
    format!("{}..{}", o.min, max)
}

pub fn to_dot(g: &SchemaGraph) -> String {
    let mut out = String::from("digraph xsg {\n");
    for v in &g.vertices {
        let _ = writeln!(
            out,
            "  n{} [label=\"{}\", shape={}];",
            v.id,
            dot_escape(&v.label),
            v.kind.shape()
        );
    }
    for e in &g.edges {
        let mut attrs = Vec::new();
        match (e.kind, e.occurs) {
            (EdgeKind::TypeToMember, Some(o)) => attrs.push(format!("label=\"{}\"", occurs_label(o))),
            (EdgeKind::Derivation(k), _) => attrs.push(format!("label=\"{}\"", k.keyword())),
            _ => {}
        }
        if g.is_back_edge(e.id) {
            attrs.push("style=dashed".to_string());
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  n{} -> n{};", e.from, e.to);
        } else {
            let _ = writeln!(out, "  n{} -> n{} [{}];", e.from, e.to, attrs.join(", "));
        }
    }
    out.push_str("}\n");
    out
}

/// Design-style-independent description: sorted vertex (kind, label) pairs
/// and sorted labelled edges. Equal signatures mean isomorphic graphs when
/// labels are unique per kind.
pub fn signature(g: &SchemaGraph) -> (Vec<(VertexKind, String)>, Vec<String>) {
    let mut vertices: Vec<(VertexKind, String)> = g.vertices.iter().map(|v| (v.kind, v.label.clone())).collect();
    vertices.sort();
    let mut edges: Vec<String> = g
        .edges
        .iter()
        .map(|e| {
            let (a, b) = (&g.vertices[e.from], &g.vertices[e.to]);
            format!(
                "{:?}:{} -{:?}/{:?}/{}-> {:?}:{}",
                a.kind,
                a.label,
                e.kind,
                e.occurs,
                g.is_back_edge(e.id),
                b.kind,
                b.label
            )
        })
        .collect();
    edges.sort();
    (vertices, edges)
}
