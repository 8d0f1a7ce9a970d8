//! Minimal XML 1.0 reader producing an ordered element tree.
//!
//! Comments, processing instructions and the XML declaration are dropped.
//! Whitespace-only text runs are not content. DTDs, CDATA sections and
//! entities other than the five predefined ones are rejected. Namespace
//! prefixes are kept syntactically and never resolved.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A possibly prefixed XML name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XmlName {
    pub prefix: Option<String>,
    pub local: String,
}

impl XmlName {
    pub fn local(local: impl Into<String>) -> Self {
        XmlName {
            prefix: None,
            local: local.into(),
        }
    }

    /// Splits `prefix:local`. Returns `None` unless both halves are NCNames.
    pub fn parse(raw: &str) -> Option<Self> {
        match raw.split_once(':') {
            Some((p, l)) if is_ncname(p) && is_ncname(l) => Some(XmlName {
                prefix: Some(p.to_string()),
                local: l.to_string(),
            }),
            Some(_) => None,
            None if is_ncname(raw) => Some(XmlName::local(raw)),
            None => None,
        }
    }

    pub fn is_namespace_decl(&self) -> bool {
        match &self.prefix {
            Some(p) => p == "xmlns",
            None => self.local == "xmlns",
        }
    }
}

impl fmt::Display for XmlName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.prefix {
            Some(p) => write!(f, "{}:{}", p, self.local),
            None => f.write_str(&self.local),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XmlNode {
    Element(XmlElement),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlElement {
    pub name: XmlName,
    pub attributes: Vec<(XmlName, String)>,
    pub children: Vec<XmlNode>,
    /// 1-based line and column of the opening `<`.
    pub position: (usize, usize),
}

impl XmlElement {
    pub fn new(name: XmlName) -> Self {
        XmlElement {
            name,
            attributes: Vec::new(),
            children: Vec::new(),
            position: (0, 0),
        }
    }

    pub fn attribute(&self, local: &str) -> Option<&str> {
        self.attributes
            .iter()
            .find(|(n, _)| n.prefix.is_none() && n.local == local)
            .map(|(_, v)| v.as_str())
    }

    pub fn child_elements(&self) -> impl Iterator<Item = &XmlElement> {
        self.children.iter().filter_map(|c| match c {
            XmlNode::Element(e) => Some(e),
            XmlNode::Text(_) => None,
        })
    }

    pub fn text_runs(&self) -> impl Iterator<Item = &str> {
        self.children.iter().filter_map(|c| match c {
            XmlNode::Text(t) => Some(t.as_str()),
            XmlNode::Element(_) => None,
        })
    }

    pub fn has_element_children(&self) -> bool {
        self.child_elements().next().is_some()
    }
}

/// Concatenation of the direct text runs of `e`, trimmed.
pub fn text_content(e: &XmlElement) -> String {
    let joined: String = e.text_runs().collect();
    joined.trim().to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlDocument {
    pub root: XmlElement,
    pub source_id: String,
}

impl XmlDocument {
    /// Serializes the tree with two-space indentation. Elements holding text
    /// are written inline so the text runs survive a re-parse unchanged.
    pub fn to_xml_string(&self) -> String {
        let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        write_element(&mut out, &self.root, 0);
        out
    }
}

fn write_element(out: &mut String, e: &XmlElement, depth: usize) {
    let indent = "  ".repeat(depth);
    out.push_str(&indent);
    write_open(out, e);
    if e.children.is_empty() {
        out.push_str("/>\n");
        return;
    }
    out.push('>');
    let has_text = e.text_runs().next().is_some();
    if has_text {
        for child in &e.children {
            match child {
                XmlNode::Text(t) => out.push_str(&escape_text(t)),
                XmlNode::Element(c) => write_inline(out, c),
            }
        }
    } else {
        out.push('\n');
        for c in e.child_elements() {
            write_element(out, c, depth + 1);
        }
        out.push_str(&indent);
    }
    out.push_str("</");
    out.push_str(&e.name.to_string());
    out.push_str(">\n");
}

fn write_inline(out: &mut String, e: &XmlElement) {
    write_open(out, e);
    if e.children.is_empty() {
        out.push_str("/>");
        return;
    }
    out.push('>');
    for child in &e.children {
        match child {
            XmlNode::Text(t) => out.push_str(&escape_text(t)),
            XmlNode::Element(c) => write_inline(out, c),
        }
    }
    out.push_str("</");
    out.push_str(&e.name.to_string());
    out.push('>');
}

fn write_open(out: &mut String, e: &XmlElement) {
    out.push('<');
    out.push_str(&e.name.to_string());
    for (n, v) in &e.attributes {
        out.push(' ');
        out.push_str(&n.to_string());
        out.push_str("=\"");
        out.push_str(&escape_attr(v));
        out.push('"');
    }
}

pub fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            _ => out.push(c),
        }
    }
    out
}

pub fn escape_attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\t' => out.push_str("&#9;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            _ => out.push(c),
        }
    }
    out
}

pub fn is_name_start_char(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || (!c.is_ascii() && c.is_alphabetic())
}

pub fn is_name_char(c: char) -> bool {
    is_name_start_char(c)
        || c.is_ascii_digit()
        || c == '-'
        || c == '.'
        || (!c.is_ascii() && c.is_alphanumeric())
}

/// Non-colonized name: a letter or underscore, then name characters.
pub fn is_ncname(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if is_name_start_char(c) => chars.all(is_name_char),
        _ => false,
    }
}

fn is_xml_char(c: char) -> bool {
    matches!(c, '\t' | '\n' | '\r')
        || ('\u{20}'..='\u{D7FF}').contains(&c)
        || ('\u{E000}'..='\u{FFFD}').contains(&c)
        || ('\u{10000}'..='\u{10FFFF}').contains(&c)
}

pub fn parse_xml(bytes: &[u8], source_id: &str) -> Result<XmlDocument, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let prefix = &bytes[..e.valid_up_to()];
        let line = 1 + prefix.iter().filter(|&&b| b == b'\n').count();
        ParseError {
            line,
            column: 1,
            message: "input is not valid UTF-8".to_string(),
        }
    })?;
    let text = text.strip_prefix('\u{FEFF}').unwrap_or(text);
    let root = Parser::new(text).document()?;
    Ok(XmlDocument {
        root,
        source_id: source_id.to_string(),
    })
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(self.error_at((self.line, self.column), message))
    }

    fn error_at(&self, at: (usize, usize), message: impl Into<String>) -> ParseError {
        ParseError {
            line: at.0,
            column: at.1,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn starts_with(&self, s: &str) -> bool {
        self.rest().starts_with(s)
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.starts_with(s) {
            for _ in s.chars() {
                self.bump();
            }
            Ok(())
        } else {
            self.err(format!("expected `{}`", s))
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t' | '\n' | '\r')) {
            self.bump();
        }
    }

    /// Skips up to and including `end`, checking characters on the way.
    fn skip_until(&mut self, end: &str, what: &str) -> Result<(), ParseError> {
        let start = (self.line, self.column);
        loop {
            if self.at_end() {
                return Err(self.error_at(start, format!("unterminated {}", what)));
            }
            if self.starts_with(end) {
                return self.expect(end);
            }
            let c = self.bump().unwrap_or('\0');
            if !is_xml_char(c) {
                return self.err(format!("illegal character U+{:04X}", c as u32));
            }
        }
    }

    fn misc(&mut self) -> Result<(), ParseError> {
        loop {
            self.skip_ws();
            if self.starts_with("<!--") {
                self.comment()?;
            } else if self.starts_with("<?") {
                self.expect("<?")?;
                self.skip_until("?>", "processing instruction")?;
            } else if self.starts_with("<!DOCTYPE") {
                return self.err("DTDs are not supported");
            } else {
                return Ok(());
            }
        }
    }

    fn comment(&mut self) -> Result<(), ParseError> {
        self.expect("<!--")?;
        let start = (self.line, self.column);
        loop {
            if self.at_end() {
                return Err(self.error_at(start, "unterminated comment"));
            }
            if self.starts_with("--") {
                if self.starts_with("-->") {
                    return self.expect("-->");
                }
                return self.err("`--` is not allowed inside a comment");
            }
            let c = self.bump().unwrap_or('\0');
            if !is_xml_char(c) {
                return self.err(format!("illegal character U+{:04X}", c as u32));
            }
        }
    }

    fn document(&mut self) -> Result<XmlElement, ParseError> {
        self.misc()?;
        if self.peek() != Some('<') {
            return if self.at_end() {
                self.err("document has no root element")
            } else {
                self.err("content before the root element")
            };
        }
        let root = self.element()?;
        self.misc()?;
        if !self.at_end() {
            return if self.peek() == Some('<') {
                self.err("document has more than one root element")
            } else {
                self.err("content after the root element")
            };
        }
        Ok(root)
    }

    fn name(&mut self) -> Result<XmlName, ParseError> {
        let at = (self.line, self.column);
        let start = self.pos;
        while let Some(c) = self.peek() {
            if is_name_char(c) || c == ':' {
                self.bump();
            } else {
                break;
            }
        }
        let raw = &self.src[start..self.pos];
        if raw.is_empty() {
            return self.err("expected a name");
        }
        XmlName::parse(raw).ok_or_else(|| self.error_at(at, format!("invalid name `{}`", raw)))
    }

    /// Iterative so that deep documents cannot overflow the stack.
    fn element(&mut self) -> Result<XmlElement, ParseError> {
        let mut stack: Vec<(XmlElement, String)> = Vec::new();
        let (first, empty) = self.start_tag()?;
        if empty {
            return Ok(first);
        }
        stack.push((first, String::new()));
        loop {
            if self.at_end() {
                let (open, _) = stack.last().expect("open element");
                return Err(self.error_at(
                    open.position,
                    format!("element `{}` is never closed", open.name),
                ));
            }
            if self.starts_with("</") {
                let at = (self.line, self.column);
                self.expect("</")?;
                let name = self.name()?;
                self.skip_ws();
                self.expect(">")?;
                let (mut done, pending) = stack.pop().expect("open element");
                if name != done.name {
                    return Err(self.error_at(
                        at,
                        format!("mismatched closing tag `{}`, expected `{}`", name, done.name),
                    ));
                }
                flush_text(&mut done, pending);
                match stack.last_mut() {
                    Some((parent, _)) => parent.children.push(XmlNode::Element(done)),
                    None => return Ok(done),
                }
            } else if self.starts_with("<!--") {
                self.comment()?;
            } else if self.starts_with("<![CDATA[") {
                return self.err("CDATA sections are not supported");
            } else if self.starts_with("<!") {
                return self.err("markup declarations are not supported");
            } else if self.starts_with("<?") {
                self.expect("<?")?;
                self.skip_until("?>", "processing instruction")?;
            } else if self.starts_with("<") {
                let (child, empty) = self.start_tag()?;
                let (parent, pending) = stack.last_mut().expect("open element");
                flush_text(parent, std::mem::take(pending));
                if empty {
                    parent.children.push(XmlNode::Element(child));
                } else {
                    stack.push((child, String::new()));
                }
            } else {
                let text = self.char_data()?;
                stack.last_mut().expect("open element").1.push_str(&text);
            }
        }
    }

    fn start_tag(&mut self) -> Result<(XmlElement, bool), ParseError> {
        let position = (self.line, self.column);
        self.expect("<")?;
        let name = self.name()?;
        let mut el = XmlElement {
            name,
            attributes: Vec::new(),
            children: Vec::new(),
            position,
        };
        loop {
            let had_ws = matches!(self.peek(), Some(' ' | '\t' | '\n' | '\r'));
            self.skip_ws();
            if self.starts_with("/>") {
                self.expect("/>")?;
                return Ok((el, true));
            }
            if self.starts_with(">") {
                self.expect(">")?;
                return Ok((el, false));
            }
            if self.at_end() {
                return Err(self.error_at(position, "unterminated start tag"));
            }
            if !had_ws {
                return self.err("expected whitespace before attribute");
            }
            let at = (self.line, self.column);
            let attr = self.name()?;
            self.skip_ws();
            self.expect("=")?;
            self.skip_ws();
            let value = self.attr_value()?;
            if el.attributes.iter().any(|(n, _)| *n == attr) {
                return Err(self.error_at(at, format!("duplicate attribute `{}`", attr)));
            }
            el.attributes.push((attr, value));
        }
    }

    fn attr_value(&mut self) -> Result<String, ParseError> {
        let quote = match self.peek() {
            Some(q @ ('"' | '\'')) => q,
            _ => return self.err("expected a quoted attribute value"),
        };
        self.bump();
        let mut out = String::new();
        loop {
            match self.peek() {
                None => return self.err("unterminated attribute value"),
                Some(c) if c == quote => {
                    self.bump();
                    return Ok(out);
                }
                Some('<') => return self.err("`<` is not allowed in attribute values"),
                Some('&') => out.push(self.reference()?),
                // Attribute-value normalization.
                Some('\t' | '\n' | '\r') => {
                    self.bump();
                    out.push(' ');
                }
                Some(c) => {
                    if !is_xml_char(c) {
                        return self.err(format!("illegal character U+{:04X}", c as u32));
                    }
                    self.bump();
                    out.push(c);
                }
            }
        }
    }

    fn char_data(&mut self) -> Result<String, ParseError> {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            match c {
                '<' => break,
                '&' => out.push(self.reference()?),
                _ => {
                    if !is_xml_char(c) {
                        return self.err(format!("illegal character U+{:04X}", c as u32));
                    }
                    if c == '>' && out.ends_with("]]") {
                        return self.err("`]]>` is not allowed in text");
                    }
                    self.bump();
                    if c == '\r' {
                        if self.peek() != Some('\n') {
                            out.push('\n');
                        }
                    } else {
                        out.push(c);
                    }
                }
            }
        }
        Ok(out)
    }

    fn reference(&mut self) -> Result<char, ParseError> {
        let at = (self.line, self.column);
        self.expect("&")?;
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c == ';' {
                break;
            }
            if !(c.is_ascii_alphanumeric() || c == '#') {
                return Err(self.error_at(at, "malformed entity reference"));
            }
            self.bump();
        }
        let body = &self.src[start..self.pos];
        if self.peek() != Some(';') {
            return Err(self.error_at(at, "unterminated entity reference"));
        }
        self.bump();
        let c = match body {
            "lt" => '<',
            "gt" => '>',
            "amp" => '&',
            "quot" => '"',
            "apos" => '\'',
            _ if body.starts_with("#x") => u32::from_str_radix(&body[2..], 16)
                .ok()
                .and_then(char::from_u32)
                .ok_or_else(|| self.error_at(at, format!("invalid character reference `&{};`", body)))?,
            _ if body.starts_with('#') => body[1..]
                .parse::<u32>()
                .ok()
                .and_then(char::from_u32)
                .ok_or_else(|| self.error_at(at, format!("invalid character reference `&{};`", body)))?,
            _ => return Err(self.error_at(at, format!("undefined entity `&{};`", body))),
        };
        if !is_xml_char(c) {
            return Err(self.error_at(at, format!("character reference to illegal U+{:04X}", c as u32)));
        }
        Ok(c)
    }
}

fn flush_text(el: &mut XmlElement, pending: String) {
    if pending.trim().is_empty() {
        return;
    }
    if let Some(XmlNode::Text(prev)) = el.children.last_mut() {
        prev.push_str(&pending);
    } else {
        el.children.push(XmlNode::Text(pending));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<XmlDocument, ParseError> {
        parse_xml(s.as_bytes(), "test")
    }

    #[test]
    fn minimal_document() {
        let doc = parse("<a/>").unwrap();
        assert_eq!(doc.root.name, XmlName::local("a"));
        assert!(doc.root.attributes.is_empty());
        assert!(doc.root.children.is_empty());
        assert_eq!(doc.source_id, "test");
    }

    #[test]
    fn mixed_content_keeps_order() {
        let doc = parse("<a><b/>text</a>").unwrap();
        assert_eq!(
            doc.root.children,
            vec![
                XmlNode::Element(XmlElement {
                    name: XmlName::local("b"),
                    attributes: vec![],
                    children: vec![],
                    position: (1, 4),
                }),
                XmlNode::Text("text".into()),
            ]
        );
    }

    #[test]
    fn drops_declaration_comments_and_pis() {
        let doc = parse(
            "<?xml version=\"1.0\"?>\n<!-- c -->\n<a><?pi x?><!-- inner --><b/></a>\n<!-- tail -->",
        )
        .unwrap();
        assert_eq!(doc.root.children.len(), 1);
    }

    #[test]
    fn whitespace_between_elements_is_not_content() {
        let doc = parse("<a>\n  <b/>\n  <c/>\n</a>").unwrap();
        assert_eq!(doc.root.children.len(), 2);
        assert!(doc.root.text_runs().next().is_none());
    }

    #[test]
    fn text_runs_split_by_comment_are_coalesced() {
        let doc = parse("<a>x<!-- c -->y</a>").unwrap();
        assert_eq!(doc.root.children, vec![XmlNode::Text("xy".into())]);
    }

    #[test]
    fn text_content_cases() {
        let doc = parse("<pubdate>1977</pubdate>").unwrap();
        assert_eq!(text_content(&doc.root), "1977");
        let doc = parse("<e><x/></e>").unwrap();
        assert_eq!(text_content(&doc.root), "");
        let doc = parse("<t>a<x/>b</t>").unwrap();
        assert_eq!(text_content(&doc.root), "ab");
    }

    #[test]
    fn predefined_entities_and_char_refs() {
        let doc = parse("<a v=\"&quot;&amp;\">&lt;&#65;&#x42;&apos;&gt;</a>").unwrap();
        assert_eq!(doc.root.attribute("v"), Some("\"&"));
        assert_eq!(text_content(&doc.root), "<AB'>");
    }

    #[test]
    fn prefixes_are_syntactic() {
        let doc = parse("<xs:schema xmlns:xs=\"urn:x\"><xs:element/></xs:schema>").unwrap();
        assert_eq!(doc.root.name.prefix.as_deref(), Some("xs"));
        assert_eq!(doc.root.name.local, "schema");
        assert!(doc.root.attributes[0].0.is_namespace_decl());
    }

    #[test]
    fn records_positions() {
        let doc = parse("<a>\n  <b/>\n</a>").unwrap();
        assert_eq!(doc.root.position, (1, 1));
        assert_eq!(doc.root.child_elements().next().unwrap().position, (2, 3));
    }

    #[test]
    fn rejects_malformed_input() {
        let cases = [
            ("<a><b></a>", "mismatched"),
            ("<a>", "never closed"),
            ("<a x=\"1\" x=\"2\"/>", "duplicate attribute"),
            ("<a>\u{1}</a>", "illegal character"),
            ("<!DOCTYPE a><a/>", "DTD"),
            ("<a><![CDATA[x]]></a>", "CDATA"),
            ("<a>&nbsp;</a>", "undefined entity"),
            ("<a/><b/>", "more than one root"),
            ("", "no root"),
            ("text<a/>", "before the root"),
            ("<a:b:c/>", "invalid name"),
            ("<a x=1/>", "quoted"),
            ("<a x=\"<\"/>", "not allowed in attribute"),
        ];
        for (input, needle) in cases {
            let err = parse(input).unwrap_err();
            assert!(
                err.message.contains(needle),
                "{:?}: got {:?}",
                input,
                err.message
            );
        }
    }

    #[test]
    fn error_position_points_at_problem() {
        let err = parse("<a>\n  <b x=\"1\" x=\"2\"/>\n</a>").unwrap_err();
        assert_eq!((err.line, err.column), (2, 12));
    }

    #[test]
    fn rejects_invalid_utf8() {
        let err = parse_xml(b"<a>\xff</a>", "bad").unwrap_err();
        assert!(err.message.contains("UTF-8"));
    }

    #[test]
    fn ncname_rules() {
        assert!(is_ncname("FHIW13C-1234"));
        assert!(is_ncname("_x.y"));
        assert!(!is_ncname("1abc"));
        assert!(!is_ncname("a:b"));
        assert!(!is_ncname("a b"));
        assert!(!is_ncname(""));
    }

    #[test]
    fn serialization_reparses_to_equal_tree() {
        let src = "<r a=\"x &amp; y\"><p>one <b>two</b> three</p><q/><q k=\"v\">4</q></r>";
        let doc = parse(src).unwrap();
        let again = parse(&doc.to_xml_string()).unwrap();
        assert_eq!(strip_positions(doc.root), strip_positions(again.root));
    }

    pub(crate) fn strip_positions(mut e: XmlElement) -> XmlElement {
        e.position = (0, 0);
        e.children = e
            .children
            .into_iter()
            .map(|c| match c {
                XmlNode::Element(x) => XmlNode::Element(strip_positions(x)),
                t => t,
            })
            .collect();
        e
    }
}
