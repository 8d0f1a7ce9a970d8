mod common;

use proptest::prelude::*;

use xsgowl_core::abox::{populate, IndividualNaming};
use xsgowl_core::owl_gen::{generate_tbox, GenOptions};
use xsgowl_core::owl_model::{check_invariants, serialize_rdfxml, serialize_turtle};
use xsgowl_core::readback::{canonicalize, inventory, read_rdfxml, read_turtle};
use xsgowl_core::schema_infer::{infer_schema, InferOptions};
use xsgowl_core::xml_doc::XmlElement;
use xsgowl_core::xsd_model::{SchemaModel, TypeRef};
use xsgowl_core::xsg::build_xsg;

/// Element instances whose declaration has a complex type.
fn complex_instances(e: &XmlElement, schema: &SchemaModel) -> usize {
    let own = matches!(
        schema.element(&e.name.local).map(|d| &d.type_ref),
        Some(TypeRef::AnonymousComplex(_))
    );
    usize::from(own) + e.child_elements().map(|c| complex_instances(c, schema)).sum::<usize>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn instances_conform_to_the_generated_tbox(seed in any::<u64>(), union in any::<bool>()) {
        let mut r = common::rng(seed);
        let g = common::grammar(&mut r);
        let docs = common::documents(&mut r, &g, 1);
        let schema = infer_schema(&docs, "s.xsd", InferOptions::default()).unwrap().schema;
        let graph = build_xsg(&schema).unwrap();
        let opts = GenOptions { union_domains: union, ..GenOptions::default() };
        let t = generate_tbox(&schema, &graph, &opts);
        let o = populate(&docs[0], &schema, &t.ontology, &t.trace, IndividualNaming::PathOrdinal).unwrap();
        prop_assert_eq!(o.individuals.len(), complex_instances(&docs[0].root, &schema));
        prop_assert_eq!(check_invariants(&o, None), Ok(()));
        let ttl = read_turtle(&serialize_turtle(&o)).unwrap();
        let rdf = read_rdfxml(&serialize_rdfxml(&o)).unwrap();
        prop_assert_eq!(canonicalize(&ttl), canonicalize(&rdf));
        prop_assert_eq!(inventory(&ttl).individuals.len(), o.individuals.len());
    }
}
