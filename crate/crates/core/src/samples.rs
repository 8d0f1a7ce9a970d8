//! Bundled sample inputs.
//!
//! `BIBLIOGRAPHY_XML` is a publication-metadata document whose inferred
//! schema is `BIBLIOGRAPHY_XSD`. The commonly circulated excerpt of this
//! document nests a second `<bibliography>` where the schema expects
//! `<biblioentry>`, and names the author's last name `<lastname>` where the
//! schema declares `<surname>` (plus an optional `<othername>`). Both
//! samples here use the schema's names; the full document carries three
//! entries so that the repeated and optional particles of the schema are
//! actually observed.

pub const BIBLIOGRAPHY_XML: &str = include_str!("../samples/bibliography.xml");

/// One entry with one author and no `othername`.
pub const BIBLIOGRAPHY_EXCERPT_XML: &str = include_str!("../samples/bibliography-excerpt.xml");

/// Salami-slice schema: every element global, content models by `ref=`.
pub const BIBLIOGRAPHY_XSD: &str = include_str!("../samples/bibliography.xsd");

/// The same structure with every declaration nested in place.
pub const BIBLIOGRAPHY_RUSSIAN_DOLL_XSD: &str = include_str!("../samples/bibliography-russian-doll.xsd");

/// Element `part` whose anonymous type contains `part`.
pub const RECURSIVE_XSD: &str = include_str!("../samples/recursive.xsd");

/// Named type `authorType` extending `personType`.
pub const PERSON_EXTENSION_XSD: &str = include_str!("../samples/person-extension.xsd");
