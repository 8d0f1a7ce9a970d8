//! XML Schema built-in simple types understood by this crate and their
//! lexical rules.

use std::fmt;

use crate::xml_doc::{is_name_char, is_name_start_char, is_ncname};

pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    AnyType,
    AnySimpleType,
    String,
    NormalizedString,
    Token,
    Name,
    NCName,
    NmToken,
    Id,
    IdRef,
    Language,
    AnyUri,
    Boolean,
    Decimal,
    Integer,
    Long,
    Int,
    Short,
    Byte,
    NonNegativeInteger,
    PositiveInteger,
    NonPositiveInteger,
    NegativeInteger,
    Float,
    Double,
    Date,
    DateTime,
    Time,
}

const ALL: &[(Builtin, &str)] = &[
    (Builtin::AnyType, "anyType"),
    (Builtin::AnySimpleType, "anySimpleType"),
    (Builtin::String, "string"),
    (Builtin::NormalizedString, "normalizedString"),
    (Builtin::Token, "token"),
    (Builtin::Name, "Name"),
    (Builtin::NCName, "NCName"),
    (Builtin::NmToken, "NMTOKEN"),
    (Builtin::Id, "ID"),
    (Builtin::IdRef, "IDREF"),
    (Builtin::Language, "language"),
    (Builtin::AnyUri, "anyURI"),
    (Builtin::Boolean, "boolean"),
    (Builtin::Decimal, "decimal"),
    (Builtin::Integer, "integer"),
    (Builtin::Long, "long"),
    (Builtin::Int, "int"),
    (Builtin::Short, "short"),
    (Builtin::Byte, "byte"),
    (Builtin::NonNegativeInteger, "nonNegativeInteger"),
    (Builtin::PositiveInteger, "positiveInteger"),
    (Builtin::NonPositiveInteger, "nonPositiveInteger"),
    (Builtin::NegativeInteger, "negativeInteger"),
    (Builtin::Float, "float"),
    (Builtin::Double, "double"),
    (Builtin::Date, "date"),
    (Builtin::DateTime, "dateTime"),
    (Builtin::Time, "time"),
];

impl Builtin {
    pub fn from_local_name(name: &str) -> Option<Builtin> {
        ALL.iter().find(|(_, n)| *n == name).map(|(b, _)| *b)
    }

    pub fn local_name(self) -> &'static str {
        ALL.iter()
            .find(|(b, _)| *b == self)
            .map(|(_, n)| *n)
            .expect("every builtin is named")
    }

    pub fn iri(self) -> String {
        format!("{}#{}", XSD_NS, self.local_name())
    }

    /// True when `value` is in the lexical space of this type (no facets).
    pub fn accepts(self, value: &str) -> bool {
        use Builtin::*;
        match self {
            AnyType | AnySimpleType | String | AnyUri => true,
            NormalizedString => !value.contains(['\t', '\n', '\r']),
            Token => {
                !value.contains(['\t', '\n', '\r'])
                    && !value.starts_with(' ')
                    && !value.ends_with(' ')
                    && !value.contains("  ")
            }
            Name => is_xml_name(value),
            NCName | Id | IdRef => is_ncname(value),
            NmToken => !value.is_empty() && value.chars().all(|c| is_name_char(c) || c == ':'),
            Language => is_language(value),
            Boolean => matches!(value, "true" | "false" | "1" | "0"),
            Decimal => is_decimal(value),
            Integer => is_integer(value),
            Long => in_range(value, i64::MIN as i128, i64::MAX as i128),
            Int => in_range(value, i32::MIN as i128, i32::MAX as i128),
            Short => in_range(value, i16::MIN as i128, i16::MAX as i128),
            Byte => in_range(value, i8::MIN as i128, i8::MAX as i128),
            NonNegativeInteger => is_integer(value) && !is_negative(value),
            PositiveInteger => is_integer(value) && !is_negative(value) && !is_zero(value),
            NonPositiveInteger => is_integer(value) && (is_negative(value) || is_zero(value)),
            NegativeInteger => is_integer(value) && is_negative(value) && !is_zero(value),
            Float | Double => is_float(value),
            Date => is_date(value),
            DateTime => is_date_time(value),
            Time => is_time(value),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "xs:{}", self.local_name())
    }
}

fn is_xml_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if is_name_start_char(c) || c == ':' => chars.all(|c| is_name_char(c) || c == ':'),
        _ => false,
    }
}

fn is_language(s: &str) -> bool {
    let mut parts = s.split('-');
    let first = parts.next().unwrap_or("");
    (1..=8).contains(&first.len())
        && first.chars().all(|c| c.is_ascii_alphabetic())
        && parts.all(|p| (1..=8).contains(&p.len()) && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

fn unsigned_digits(s: &str) -> &str {
    s.strip_prefix(['+', '-']).unwrap_or(s)
}

/// Optional sign followed by one or more ASCII digits.
pub fn is_integer(s: &str) -> bool {
    let d = unsigned_digits(s);
    !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit())
}

/// Optional sign, digits, and at most one decimal point, at least one digit.
pub fn is_decimal(s: &str) -> bool {
    let d = unsigned_digits(s);
    let (int, frac) = match d.split_once('.') {
        Some((i, f)) => (i, f),
        None => (d, ""),
    };
    (!int.is_empty() || !frac.is_empty())
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.bytes().all(|b| b.is_ascii_digit())
}

fn is_negative(s: &str) -> bool {
    s.starts_with('-') && !is_zero(s)
}

fn is_zero(s: &str) -> bool {
    unsigned_digits(s).bytes().all(|b| b == b'0')
}

fn in_range(s: &str, lo: i128, hi: i128) -> bool {
    if !is_integer(s) {
        return false;
    }
    match s.parse::<i128>() {
        Ok(v) => (lo..=hi).contains(&v),
        Err(_) => false,
    }
}

fn is_float(s: &str) -> bool {
    if matches!(s, "INF" | "-INF" | "+INF" | "NaN") {
        return true;
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    is_decimal(mantissa) && exp.is_none_or(is_integer)
}

fn digits(s: &str, n: usize) -> bool {
    s.len() == n && s.bytes().all(|b| b.is_ascii_digit())
}

fn strip_timezone(s: &str) -> Option<&str> {
    if let Some(rest) = s.strip_suffix('Z') {
        return Some(rest);
    }
    if s.len() > 6 {
        let (head, tz) = s.split_at(s.len() - 6);
        let b = tz.as_bytes();
        if (b[0] == b'+' || b[0] == b'-') && b[3] == b':' && digits(&tz[1..3], 2) && digits(&tz[4..], 2) {
            return Some(head);
        }
    }
    Some(s)
}

fn is_plain_date(s: &str) -> bool {
    let s = s.strip_prefix('-').unwrap_or(s);
    let parts: Vec<&str> = s.split('-').collect();
    if parts.len() != 3 || parts[0].len() < 4 || !parts[0].bytes().all(|b| b.is_ascii_digit()) {
        return false;
    }
    if !digits(parts[1], 2) || !digits(parts[2], 2) {
        return false;
    }
    let month: u32 = parts[1].parse().unwrap_or(0);
    let day: u32 = parts[2].parse().unwrap_or(0);
    (1..=12).contains(&month) && (1..=31).contains(&day)
}

fn is_plain_time(s: &str) -> bool {
    let (hms, frac) = match s.split_once('.') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let parts: Vec<&str> = hms.split(':').collect();
    if parts.len() != 3 || !parts.iter().all(|p| digits(p, 2)) {
        return false;
    }
    let h: u32 = parts[0].parse().unwrap_or(99);
    let m: u32 = parts[1].parse().unwrap_or(99);
    let sec: u32 = parts[2].parse().unwrap_or(99);
    frac.is_none_or(|f| !f.is_empty() && f.bytes().all(|b| b.is_ascii_digit()))
        && (h < 24 || (h == 24 && m == 0 && sec == 0))
        && m < 60
        && sec < 60
}

fn is_date(s: &str) -> bool {
    strip_timezone(s).is_some_and(is_plain_date)
}

fn is_time(s: &str) -> bool {
    strip_timezone(s).is_some_and(is_plain_time)
}

fn is_date_time(s: &str) -> bool {
    let Some(body) = strip_timezone(s) else {
        return false;
    };
    match body.split_once('T') {
        Some((d, t)) => is_plain_date(d) && is_plain_time(t),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for (b, n) in ALL {
            assert_eq!(Builtin::from_local_name(n), Some(*b));
            assert_eq!(b.local_name(), *n);
        }
        assert_eq!(Builtin::from_local_name("gYear"), None);
        assert_eq!(Builtin::Integer.iri(), "http://www.w3.org/2001/XMLSchema#integer");
    }

    #[test]
    fn numeric_lexical_spaces() {
        assert!(Builtin::Integer.accepts("1977"));
        assert!(Builtin::Integer.accepts("-5"));
        assert!(!Builtin::Integer.accepts("nineteen"));
        assert!(!Builtin::Integer.accepts("1.5"));
        assert!(Builtin::Decimal.accepts("1.5"));
        assert!(Builtin::Decimal.accepts(".5"));
        assert!(Builtin::Decimal.accepts("3"));
        assert!(!Builtin::Decimal.accepts("."));
        assert!(!Builtin::Decimal.accepts("1.2.3"));
        assert!(Builtin::Byte.accepts("127"));
        assert!(!Builtin::Byte.accepts("128"));
        assert!(Builtin::PositiveInteger.accepts("1"));
        assert!(!Builtin::PositiveInteger.accepts("0"));
        assert!(Builtin::NonNegativeInteger.accepts("-0"));
        assert!(Builtin::NegativeInteger.accepts("-1"));
        assert!(Builtin::Double.accepts("1.5e10"));
        assert!(Builtin::Float.accepts("NaN"));
        assert!(!Builtin::Float.accepts("1e"));
    }

    #[test]
    fn temporal_lexical_spaces() {
        assert!(Builtin::Date.accepts("1977-03-01"));
        assert!(Builtin::Date.accepts("1977-03-01Z"));
        assert!(Builtin::Date.accepts("1977-03-01+02:00"));
        assert!(!Builtin::Date.accepts("1977-13-01"));
        assert!(Builtin::DateTime.accepts("2001-10-26T21:32:52.12679"));
        assert!(!Builtin::DateTime.accepts("2001-10-26"));
        assert!(Builtin::Time.accepts("21:32:52"));
        assert!(!Builtin::Time.accepts("25:00:00"));
    }

    #[test]
    fn string_family() {
        assert!(Builtin::String.accepts("Cornell University Press"));
        assert!(Builtin::NCName.accepts("Godfrey"));
        assert!(!Builtin::NCName.accepts("Cornell University Press"));
        assert!(Builtin::Token.accepts("a b"));
        assert!(!Builtin::Token.accepts("a  b"));
        assert!(!Builtin::NormalizedString.accepts("a\tb"));
        assert!(Builtin::Boolean.accepts("1"));
        assert!(!Builtin::Boolean.accepts("yes"));
        assert!(Builtin::Language.accepts("en-GB"));
        assert!(Builtin::Name.accepts("xs:string"));
    }
}
