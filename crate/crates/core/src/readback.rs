//! Minimal Turtle and RDF/XML readers, enough to parse what
//! [`crate::owl_model`] writes back into triples and compare the two
//! syntaxes. Blank nodes are canonicalized by content, which is exact for
//! the tree-shaped blank nodes (restrictions, unions, lists) we emit.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::owl_model::{OWL_NS, RDF_NS};
use crate::xml_doc::{parse_xml, text_content, XmlElement, XmlName};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(String),
    Blank(usize),
    Literal { lexical: String, datatype: Option<String> },
}

pub type Triple = (Term, String, Term);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{syntax} read error: {message}")]
pub struct ReadError {
    pub syntax: &'static str,
    pub message: String,
}

fn err<T>(syntax: &'static str, message: impl Into<String>) -> Result<T, ReadError> {
    Err(ReadError {
        syntax,
        message: message.into(),
    })
}

const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

#[derive(Default)]
struct Sink {
    triples: Vec<Triple>,
    blanks: usize,
}

impl Sink {
    fn blank(&mut self) -> Term {
        self.blanks += 1;
        Term::Blank(self.blanks)
    }

    fn list(&mut self, items: Vec<Term>) -> Term {
        let mut tail = Term::Iri(format!("{}nil", RDF_NS));
        for item in items.into_iter().rev() {
            let node = self.blank();
            self.triples.push((node.clone(), format!("{}first", RDF_NS), item));
            self.triples.push((node.clone(), format!("{}rest", RDF_NS), tail));
            tail = node;
        }
        tail
    }
}

// ---- Turtle ----

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Iri(String),
    PName(String),
    Str(String),
    Punct(char),
    Prefix,
    DtMark,
    Lang(String),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, ReadError> {
    const T: &str = "Turtle";
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '<' => {
                let start = i + 1;
                i = start;
                while i < chars.len() && chars[i] != '>' {
                    i += 1;
                }
                if i == chars.len() {
                    return err(T, "unterminated IRI");
                }
                out.push(Tok::Iri(chars[start..i].iter().collect()));
                i += 1;
            }
            '"' => {
                i += 1;
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None => return err(T, "unterminated string"),
                        Some('"') => break,
                        Some('\\') => {
                            let e = chars.get(i + 1).copied();
                            s.push(match e {
                                Some('n') => '\n',
                                Some('r') => '\r',
                                Some('t') => '\t',
                                Some('"') => '"',
                                Some('\\') => '\\',
                                other => return err(T, format!("unsupported escape {:?}", other)),
                            });
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                i += 1;
                out.push(Tok::Str(s));
            }
            '^' if chars.get(i + 1) == Some(&'^') => {
                out.push(Tok::DtMark);
                i += 2;
            }
            '[' | ']' | '(' | ')' | ';' | ',' => {
                out.push(Tok::Punct(c));
                i += 1;
            }
            '.' if chars.get(i + 1).is_none_or(|n| n.is_whitespace()) => {
                out.push(Tok::Punct('.'));
                i += 1;
            }
            '@' => {
                let start = i + 1;
                i = start;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '-') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push(if word == "prefix" { Tok::Prefix } else { Tok::Lang(word) });
            }
            _ => {
                let start = i;
                while i < chars.len() && !chars[i].is_whitespace() && !"<>\"()[];,".contains(chars[i]) {
                    i += 1;
                }
                let mut end = i;
                while end > start && chars[end - 1] == '.' {
                    end -= 1;
                }
                i = end;
                if end == start {
                    return err(T, format!("unexpected character {:?}", c));
                }
                out.push(Tok::PName(chars[start..end].iter().collect()));
            }
        }
    }
    Ok(out)
}

struct TurtleParser {
    toks: Vec<Tok>,
    pos: usize,
    prefixes: HashMap<String, String>,
    sink: Sink,
}

impl TurtleParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Tok, ReadError> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t.map_or_else(|| err("Turtle", "unexpected end of input"), Ok)
    }

    fn expect(&mut self, c: char) -> Result<(), ReadError> {
        match self.next()? {
            Tok::Punct(p) if p == c => Ok(()),
            t => err("Turtle", format!("expected `{}`, found {:?}", c, t)),
        }
    }

    fn expand(&self, pname: &str) -> Result<String, ReadError> {
        if pname == "a" {
            return Ok(RDF_TYPE.to_string());
        }
        let (p, local) = pname
            .split_once(':')
            .map_or_else(|| err("Turtle", format!("bad name `{}`", pname)), Ok)?;
        match self.prefixes.get(p) {
            Some(ns) => Ok(format!("{}{}", ns, local)),
            None => err("Turtle", format!("undeclared prefix `{}`", p)),
        }
    }

    fn iri(&mut self) -> Result<String, ReadError> {
        match self.next()? {
            Tok::Iri(i) => Ok(i),
            Tok::PName(p) => self.expand(&p),
            t => err("Turtle", format!("expected IRI, found {:?}", t)),
        }
    }

    fn document(&mut self) -> Result<(), ReadError> {
        while self.peek().is_some() {
            if self.peek() == Some(&Tok::Prefix) {
                self.pos += 1;
                let name = match self.next()? {
                    Tok::PName(p) if p.ends_with(':') => p.trim_end_matches(':').to_string(),
                    t => return err("Turtle", format!("bad prefix name {:?}", t)),
                };
                let ns = match self.next()? {
                    Tok::Iri(i) => i,
                    t => return err("Turtle", format!("bad prefix IRI {:?}", t)),
                };
                self.prefixes.insert(name, ns);
                self.expect('.')?;
                continue;
            }
            let subject = if self.peek() == Some(&Tok::Punct('[')) {
                self.pos += 1;
                let b = self.sink.blank();
                if self.peek() != Some(&Tok::Punct(']')) {
                    self.predicate_objects(&b)?;
                }
                self.expect(']')?;
                b
            } else {
                Term::Iri(self.iri()?)
            };
            if self.peek() != Some(&Tok::Punct('.')) {
                self.predicate_objects(&subject)?;
            }
            self.expect('.')?;
        }
        Ok(())
    }

    fn predicate_objects(&mut self, subject: &Term) -> Result<(), ReadError> {
        loop {
            let pred = self.iri()?;
            loop {
                let o = self.object()?;
                self.sink.triples.push((subject.clone(), pred.clone(), o));
                if self.peek() == Some(&Tok::Punct(',')) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if self.peek() != Some(&Tok::Punct(';')) {
                return Ok(());
            }
            while self.peek() == Some(&Tok::Punct(';')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(Tok::Punct('.')) | Some(Tok::Punct(']')) | None) {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term, ReadError> {
        match self.next()? {
            Tok::Iri(i) => Ok(Term::Iri(i)),
            Tok::PName(p) => Ok(Term::Iri(self.expand(&p)?)),
            Tok::Str(s) => {
                let datatype = match self.peek() {
                    Some(Tok::DtMark) => {
                        self.pos += 1;
                        Some(self.iri()?)
                    }
                    Some(Tok::Lang(_)) => {
                        self.pos += 1;
                        None
                    }
                    _ => None,
                };
                Ok(Term::Literal { lexical: s, datatype })
            }
            Tok::Punct('[') => {
                let b = self.sink.blank();
                if self.peek() != Some(&Tok::Punct(']')) {
                    self.predicate_objects(&b)?;
                }
                self.expect(']')?;
                Ok(b)
            }
            Tok::Punct('(') => {
                let mut items = Vec::new();
                while self.peek() != Some(&Tok::Punct(')')) {
                    items.push(self.object()?);
                }
                self.pos += 1;
                Ok(self.sink.list(items))
            }
            t => err("Turtle", format!("unexpected {:?}", t)),
        }
    }
}

pub fn read_turtle(src: &str) -> Result<Vec<Triple>, ReadError> {
    let mut p = TurtleParser {
        toks: tokenize(src)?,
        pos: 0,
        prefixes: HashMap::new(),
        sink: Sink::default(),
    };
    p.document()?;
    Ok(p.sink.triples)
}

// ---- RDF/XML ----

struct XmlReader {
    sink: Sink,
}

type Scope = Vec<(String, String)>;

fn push_scope(e: &XmlElement, scope: &Scope) -> Scope {
    let mut s = scope.clone();
    for (n, v) in &e.attributes {
        if n.prefix.as_deref() == Some("xmlns") {
            s.push((n.local.clone(), v.clone()));
        } else if n.prefix.is_none() && n.local == "xmlns" {
            s.push((String::new(), v.clone()));
        }
    }
    s
}

fn resolve(name: &XmlName, scope: &Scope) -> Result<String, ReadError> {
    let p = name.prefix.as_deref().unwrap_or("");
    match scope.iter().rev().find(|(k, _)| k == p) {
        Some((_, ns)) => Ok(format!("{}{}", ns, name.local)),
        None => err("RDF/XML", format!("unbound prefix in `{}`", name)),
    }
}

fn rdf_attr<'a>(e: &'a XmlElement, local: &str, scope: &Scope) -> Option<&'a str> {
    e.attributes.iter().find_map(|(n, v)| {
        (n.local == local && n.prefix.is_some() && resolve(n, scope).ok()? == format!("{}{}", RDF_NS, local))
            .then_some(v.as_str())
    })
}

impl XmlReader {
    fn node(&mut self, e: &XmlElement, scope: &Scope) -> Result<Term, ReadError> {
        let scope = push_scope(e, scope);
        let subject = match rdf_attr(e, "about", &scope) {
            Some(a) => Term::Iri(a.to_string()),
            None => self.sink.blank(),
        };
        let ty = resolve(&e.name, &scope)?;
        if ty != format!("{}Description", RDF_NS) {
            self.sink.triples.push((subject.clone(), RDF_TYPE.to_string(), Term::Iri(ty)));
        }
        for (n, v) in &e.attributes {
            if n.is_namespace_decl() || n.prefix.as_deref() == Some("xml") {
                continue;
            }
            let p = resolve(n, &scope)?;
            if p.starts_with(RDF_NS) {
                continue;
            }
            self.sink.triples.push((
                subject.clone(),
                p,
                Term::Literal {
                    lexical: v.clone(),
                    datatype: None,
                },
            ));
        }
        for child in e.child_elements() {
            self.property(&subject, child, &scope)?;
        }
        Ok(subject)
    }

    fn property(&mut self, subject: &Term, e: &XmlElement, scope: &Scope) -> Result<(), ReadError> {
        let scope = push_scope(e, scope);
        let pred = resolve(&e.name, &scope)?;
        let object = if let Some(r) = rdf_attr(e, "resource", &scope) {
            Term::Iri(r.to_string())
        } else if rdf_attr(e, "parseType", &scope) == Some("Collection") {
            let mut items = Vec::new();
            for c in e.child_elements() {
                items.push(self.node(c, &scope)?);
            }
            self.sink.list(items)
        } else if rdf_attr(e, "parseType", &scope) == Some("Resource") {
            let b = self.sink.blank();
            for c in e.child_elements() {
                self.property(&b, c, &scope)?;
            }
            b
        } else if let Some(c) = e.child_elements().next() {
            self.node(c, &scope)?
        } else {
            Term::Literal {
                lexical: text_content(e),
                datatype: rdf_attr(e, "datatype", &scope).map(str::to_string),
            }
        };
        self.sink.triples.push((subject.clone(), pred, object));
        Ok(())
    }
}

pub fn read_rdfxml(src: &str) -> Result<Vec<Triple>, ReadError> {
    let doc = parse_xml(src.as_bytes(), "rdfxml").or_else(|e| err("RDF/XML", e.to_string()))?;
    let scope = push_scope(&doc.root, &Vec::new());
    if resolve(&doc.root.name, &scope)? != format!("{}RDF", RDF_NS) {
        return err("RDF/XML", "root element is not rdf:RDF");
    }
    let mut r = XmlReader { sink: Sink::default() };
    for c in doc.root.child_elements() {
        r.node(c, &scope)?;
    }
    Ok(r.sink.triples)
}

// ---- comparison ----

fn literal_key(lexical: &str, datatype: &Option<String>) -> String {
    match datatype {
        // A plain literal and an xsd:string literal are the same term.
        Some(d) if d != "http://www.w3.org/2001/XMLSchema#string" => format!("{:?}^^<{}>", lexical, d),
        _ => format!("{:?}", lexical),
    }
}

/// Triples with blank nodes replaced by a description of their content.
/// Triples whose subject is a blank node are folded into that description.
pub fn canonicalize(triples: &[Triple]) -> BTreeSet<(String, String, String)> {
    let mut by_blank: BTreeMap<usize, Vec<(&String, &Term)>> = BTreeMap::new();
    for (s, p, o) in triples {
        if let Term::Blank(b) = s {
            by_blank.entry(*b).or_default().push((p, o));
        }
    }
    fn describe(t: &Term, by_blank: &BTreeMap<usize, Vec<(&String, &Term)>>, depth: usize) -> String {
        match t {
            Term::Iri(i) => format!("<{}>", i),
            Term::Literal { lexical, datatype } => literal_key(lexical, datatype),
            Term::Blank(_) if depth > 64 => "[...]".to_string(),
            Term::Blank(b) => {
                let mut parts: Vec<String> = by_blank
                    .get(b)
                    .map(|v| {
                        v.iter()
                            .map(|(p, o)| format!("<{}> {}", p, describe(o, by_blank, depth + 1)))
                            .collect()
                    })
                    .unwrap_or_default();
                parts.sort();
                format!("[{}]", parts.join("; "))
            }
        }
    }
    triples
        .iter()
        .filter(|(s, _, _)| !matches!(s, Term::Blank(_)))
        .map(|(s, p, o)| (describe(s, &by_blank, 0), p.clone(), describe(o, &by_blank, 0)))
        .collect()
}

/// Named subjects per OWL entity type.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Inventory {
    pub classes: BTreeSet<String>,
    pub object_properties: BTreeSet<String>,
    pub datatype_properties: BTreeSet<String>,
    pub individuals: BTreeSet<String>,
}

pub fn inventory(triples: &[Triple]) -> Inventory {
    let mut inv = Inventory::default();
    for (s, p, o) in triples {
        let (Term::Iri(s), Term::Iri(o)) = (s, o) else { continue };
        if p != RDF_TYPE {
            continue;
        }
        let Some(kind) = o.strip_prefix(OWL_NS) else { continue };
        let set = match kind {
            "Class" => &mut inv.classes,
            "ObjectProperty" => &mut inv.object_properties,
            "DatatypeProperty" => &mut inv.datatype_properties,
            "NamedIndividual" => &mut inv.individuals,
            _ => continue,
        };
        set.insert(s.clone());
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn turtle_basics() {
        let t = read_turtle(
            "@prefix : <http://e/x#> .\n@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n\
             :a a :C , :D ;\n    :p \"v\\\"\"^^<http://t> ;\n    :q ( :x :y ) ;\n    :r [ :s :t ] .\n",
        )
        .unwrap();
        // type ×2, p, q, r, list cells 2×2, blank s
        assert_eq!(t.len(), 10);
        assert!(t.contains(&(
            Term::Iri("http://e/x#a".into()),
            "http://e/x#p".into(),
            Term::Literal {
                lexical: "v\"".into(),
                datatype: Some("http://t".into())
            }
        )));
    }

    #[test]
    fn pname_with_inner_dot() {
        let t = read_turtle("@prefix : <http://e/x#> .\n:a.b :p :c.\n").unwrap();
        assert_eq!(t[0].0, Term::Iri("http://e/x#a.b".into()));
        assert_eq!(t[0].2, Term::Iri("http://e/x#c".into()));
    }

    #[test]
    fn rdfxml_and_turtle_agree_on_a_small_graph() {
        let ttl = "@prefix : <http://e/x#> .\n:a a <http://www.w3.org/2002/07/owl#Class> ;\n    :u [ :l ( :b :c ) ] .\n";
        let xml = r#"<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#" xmlns:owl="http://www.w3.org/2002/07/owl#" xmlns:x="http://e/x#">
  <owl:Class rdf:about="http://e/x#a">
    <x:u><rdf:Description><x:l rdf:parseType="Collection"><rdf:Description rdf:about="http://e/x#b"/><rdf:Description rdf:about="http://e/x#c"/></x:l></rdf:Description></x:u>
  </owl:Class>
</rdf:RDF>"#;
        let a = read_turtle(ttl).unwrap();
        let b = read_rdfxml(xml).unwrap();
        assert_eq!(canonicalize(&a), canonicalize(&b));
        assert_eq!(inventory(&a).classes.len(), 1);
    }

    #[test]
    fn malformed_input_errors() {
        assert!(read_turtle("<a> <b> \"x").is_err());
        assert!(read_turtle(":a :b :c .").is_err());
        assert!(read_rdfxml("<notrdf/>").is_err());
    }
}
