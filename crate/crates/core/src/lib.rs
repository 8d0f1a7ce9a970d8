//! Generates OWL-DL ontologies from XML sources.
//!
//! The pipeline: parse instance documents ([`xml_doc`]), infer an XML Schema
//! ([`schema_infer`]), read it into a component model ([`xsd_model`]), build
//! the design-style-neutral schema graph ([`xsg`]), map it to OWL classes and
//! properties with a bridge trace ([`owl_gen`]), optionally populate
//! individuals ([`abox`]), and serialize ([`owl_model`]).

pub mod abox;
pub mod datatypes;
pub mod owl_gen;
pub mod owl_model;
pub mod readback;
pub mod samples;
pub mod schema_infer;
pub mod xml_doc;
pub mod xsd_model;
pub mod xsg;
