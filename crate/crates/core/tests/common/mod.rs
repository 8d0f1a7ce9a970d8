//! Random inputs shared by the property tests: documents drawn from a
//! random sequence grammar, and schemas drawn from the supported subset.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use xsgowl_core::datatypes::Builtin;
use xsgowl_core::xml_doc::{parse_xml, XmlDocument, XmlElement, XmlName, XmlNode};
use xsgowl_core::xsd_model::{
    AttrDecl, AttrGroupDecl, ComplexType, Derivation, DerivationKind, ElementDecl, GlobalType, GroupDecl,
    MaxOccurs, Occurs, Particle, ParticleTerm, SchemaModel, SimpleRef, SimpleType, TypeRef,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub enum TextKind {
    Boolean,
    Integer,
    Decimal,
    NCName,
    Free,
    /// Any of the above, chosen per instance.
    Mixed,
}

#[derive(Debug, Clone)]
pub struct Decl {
    pub children: Vec<(usize, u32, bool)>,
    pub text: Option<TextKind>,
    pub attributes: Vec<(String, TextKind, bool)>,
    pub mixed: bool,
}

#[derive(Debug, Clone)]
pub struct Grammar {
    pub decls: Vec<Decl>,
}

fn text_kind(r: &mut ChaCha8Rng) -> TextKind {
    *[
        TextKind::Boolean,
        TextKind::Integer,
        TextKind::Decimal,
        TextKind::NCName,
        TextKind::Free,
        TextKind::Mixed,
    ]
    .choose(r)
    .unwrap()
}

fn value(r: &mut ChaCha8Rng, k: TextKind) -> String {
    match k {
        TextKind::Boolean => if r.gen() { "true" } else { "false" }.to_string(),
        TextKind::Integer => r.gen_range(-5000i32..5000).to_string(),
        TextKind::Decimal => format!("{}.{}", r.gen_range(-99i32..99), r.gen_range(0..100)),
        TextKind::NCName => format!("n{}-{}", r.gen_range(0..50), r.gen_range(0..9)),
        TextKind::Free => ["hello world", "a < b & c", "x:y", "Cornell University Press", "\"q\" 'a'"]
            .choose(r)
            .unwrap()
            .to_string(),
        TextKind::Mixed => {
            let k = text_kind(r);
            match k {
                TextKind::Mixed => "plain text".to_string(),
                k => value(r, k),
            }
        }
    }
}

/// Acyclic grammar over `e0..eN`; element `i` only contains higher indices.
pub fn grammar(r: &mut ChaCha8Rng) -> Grammar {
    let n = r.gen_range(2..8);
    let mut decls = Vec::new();
    for i in 0..n {
        let leaf = i == n - 1 || (i > 0 && r.gen_bool(0.35));
        let attributes = (0..r.gen_range(0..3))
            .map(|a| (format!("a{}", a), text_kind(r), r.gen_bool(0.6)))
            .collect();
        if leaf {
            decls.push(Decl {
                children: vec![],
                text: r.gen_bool(0.9).then(|| text_kind(r)),
                attributes,
                mixed: false,
            });
        } else {
            let mut pool: Vec<usize> = (i + 1..n).collect();
            pool.shuffle(r);
            pool.truncate(r.gen_range(1..=4.min(pool.len())));
            let children = pool
                .into_iter()
                .map(|c| (c, r.gen_range(0..=1), r.gen_bool(0.4)))
                .collect();
            decls.push(Decl {
                children,
                text: None,
                attributes,
                mixed: r.gen_bool(0.15),
            });
        }
    }
    Grammar { decls }
}

pub fn instance(r: &mut ChaCha8Rng, g: &Grammar, i: usize) -> XmlElement {
    let d = &g.decls[i];
    let mut e = XmlElement::new(XmlName::local(format!("e{}", i)));
    for (name, kind, required) in &d.attributes {
        if *required || r.gen_bool(0.5) {
            e.attributes.push((XmlName::local(name.clone()), value(r, *kind)));
        }
    }
    if let Some(k) = d.text {
        if r.gen_bool(0.93) {
            e.children.push(XmlNode::Text(value(r, k)));
        }
    }
    for &(c, min, unbounded) in &d.children {
        let max = if unbounded { 3 } else { 1 };
        for _ in 0..r.gen_range(min..=max) {
            if d.mixed && r.gen_bool(0.5) {
                e.children.push(XmlNode::Text("some words".to_string()));
            }
            e.children.push(XmlNode::Element(instance(r, g, c)));
        }
    }
    e
}

/// Serialized and re-parsed, so the documents carry real positions.
pub fn documents(r: &mut ChaCha8Rng, g: &Grammar, count: usize) -> Vec<XmlDocument> {
    (0..count)
        .map(|k| {
            let doc = XmlDocument {
                root: instance(r, g, 0),
                source_id: format!("doc{}", k),
            };
            parse_xml(doc.to_xml_string().as_bytes(), &doc.source_id).expect("generated XML parses")
        })
        .collect()
}

const BUILTINS: [Builtin; 6] = [
    Builtin::String,
    Builtin::Integer,
    Builtin::NCName,
    Builtin::Boolean,
    Builtin::Decimal,
    Builtin::Date,
];

struct SchemaGen<'r> {
    r: &'r mut ChaCha8Rng,
    elements: usize,
    types: usize,
    simple_types: usize,
    groups: usize,
    attr_groups: usize,
}

impl SchemaGen<'_> {
    fn builtin(&mut self) -> Builtin {
        *BUILTINS.choose(self.r).unwrap()
    }

    fn occurs(&mut self) -> Occurs {
        let min = self.r.gen_range(0..=2);
        let max = match self.r.gen_range(0..4) {
            0 => MaxOccurs::Unbounded,
            1 => MaxOccurs::Bounded(min.max(1) + 2),
            _ => MaxOccurs::Bounded(min.max(1)),
        };
        Occurs::new(min, max)
    }

    fn simple_ref(&mut self) -> SimpleRef {
        match self.r.gen_range(0..4) {
            0 if self.simple_types > 0 => SimpleRef::Named(format!("S{}", self.r.gen_range(0..self.simple_types))),
            1 => SimpleRef::Anonymous(SimpleType {
                name: None,
                base: self.builtin(),
            }),
            _ => SimpleRef::Builtin(self.builtin()),
        }
    }

    fn element_type(&mut self, depth: usize) -> TypeRef {
        match self.r.gen_range(0..6) {
            0 | 1 if depth < 3 => TypeRef::AnonymousComplex(Box::new(self.complex(None, depth + 1, None))),
            2 if self.types > 0 => TypeRef::Named(format!("T{}", self.r.gen_range(0..self.types))),
            3 if self.simple_types > 0 => TypeRef::Named(format!("S{}", self.r.gen_range(0..self.simple_types))),
            4 => TypeRef::AnonymousSimple(SimpleType {
                name: None,
                base: self.builtin(),
            }),
            _ => TypeRef::Builtin(self.builtin()),
        }
    }

    /// Particles; `group_floor` limits group refs to later groups to keep
    /// group nesting acyclic.
    fn particles(&mut self, depth: usize, group_floor: usize) -> Vec<Particle> {
        let mut out = Vec::new();
        let mut used = Vec::new();
        for _ in 0..self.r.gen_range(0..4) {
            let occurs = self.occurs();
            let term = match self.r.gen_range(0..5) {
                0 => ParticleTerm::ElementRef(format!("E{}", self.r.gen_range(0..self.elements))),
                1 if group_floor < self.groups => {
                    ParticleTerm::GroupRef(format!("G{}", self.r.gen_range(group_floor..self.groups)))
                }
                _ => {
                    let name = ["a", "b", "c", "d", "e"][self.r.gen_range(0..5)].to_string();
                    ParticleTerm::Element(ElementDecl {
                        name,
                        type_ref: self.element_type(depth),
                        position: (0, 0),
                    })
                }
            };
            let key = match &term {
                ParticleTerm::Element(d) => format!("local {}", d.name),
                ParticleTerm::ElementRef(n) => format!("ref {}", n),
                ParticleTerm::GroupRef(n) => format!("group {}", n),
            };
            if !used.contains(&key) {
                used.push(key);
                out.push(Particle { term, occurs });
            }
        }
        out
    }

    fn attributes(&mut self, floor: usize) -> (Vec<AttrDecl>, Vec<String>) {
        let mut attrs = Vec::new();
        for k in 0..self.r.gen_range(0..3) {
            attrs.push(AttrDecl {
                name: format!("at{}", k),
                datatype: self.simple_ref(),
                required: self.r.gen(),
            });
        }
        let mut groups = Vec::new();
        if floor < self.attr_groups && self.r.gen_bool(0.3) {
            groups.push(format!("A{}", self.r.gen_range(floor..self.attr_groups)));
        }
        (attrs, groups)
    }

    fn complex(&mut self, name: Option<String>, depth: usize, base: Option<usize>) -> ComplexType {
        let particles = self.particles(depth, 0);
        let (attributes, attr_group_refs) = self.attributes(0);
        ComplexType {
            name,
            particles,
            attributes,
            attr_group_refs,
            mixed: self.r.gen_bool(0.15),
            derivation: base.map(|b| Derivation {
                kind: if self.r.gen() {
                    DerivationKind::Extension
                } else {
                    DerivationKind::Restriction
                },
                base: format!("T{}", b),
            }),
        }
    }
}

pub fn schema(r: &mut ChaCha8Rng) -> SchemaModel {
    let mut g = SchemaGen {
        elements: r.gen_range(1..4),
        types: r.gen_range(0..4),
        simple_types: r.gen_range(0..2),
        groups: r.gen_range(0..3),
        attr_groups: r.gen_range(0..2),
        r,
    };
    let mut model = SchemaModel {
        source_id: "random.xsd".into(),
        ..SchemaModel::default()
    };
    for i in 0..g.elements {
        let type_ref = g.element_type(0);
        model.elements.push(ElementDecl {
            name: format!("E{}", i),
            type_ref,
            position: (0, 0),
        });
    }
    for i in 0..g.types {
        let base = (i > 0 && g.r.gen_bool(0.3)).then(|| g.r.gen_range(0..i));
        let t = g.complex(Some(format!("T{}", i)), 1, base);
        model.types.push(GlobalType::Complex(t));
    }
    for i in 0..g.simple_types {
        let base = g.builtin();
        model.types.push(GlobalType::Simple(SimpleType {
            name: Some(format!("S{}", i)),
            base,
        }));
    }
    for i in 0..g.groups {
        let particles = g.particles(1, i + 1);
        model.groups.push(GroupDecl {
            name: format!("G{}", i),
            particles,
        });
    }
    for i in 0..g.attr_groups {
        let (attributes, attr_group_refs) = g.attributes(i + 1);
        model.attribute_groups.push(AttrGroupDecl {
            name: format!("A{}", i),
            attributes,
            attr_group_refs,
        });
    }
    model
}
