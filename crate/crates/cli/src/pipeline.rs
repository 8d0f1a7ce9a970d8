use std::io::Write as _;
use std::path::{Path, PathBuf};

use xsgowl_core::abox::{populate, AboxError, IndividualNaming};
use xsgowl_core::owl_gen::{generate_tbox, write_trace, GenOptions};
use xsgowl_core::owl_model::{check_dl_profile, check_invariants, serialize_rdfxml, serialize_turtle, OntologyModel};
use xsgowl_core::schema_infer::{infer_schema, InferError, InferOptions};
use xsgowl_core::xml_doc::{parse_xml, XmlDocument};
use xsgowl_core::xsd_model::{read_schema, serialize_schema, validate, SchemaError, SchemaErrorKind, SchemaModel};
use xsgowl_core::xsg::{build_xsg, to_dot, SchemaGraph};

use crate::{stem, ExitCode, Failure, Format, InputKind, Naming, RunConfig};

/// Outcome of `generate` for one input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceReport {
    pub input: PathBuf,
    pub classes: usize,
    pub object_properties: usize,
    pub datatype_properties: usize,
    pub individuals: usize,
    pub warnings: Vec<String>,
    pub outputs: Vec<PathBuf>,
}

impl SourceReport {
    pub fn summary_line(&self) -> String {
        format!(
            "{}: {} classes, {} object properties, {} datatype properties, {} individuals, {} warnings",
            self.input.display(),
            self.classes,
            self.object_properties,
            self.datatype_properties,
            self.individuals,
            self.warnings.len()
        )
    }
}

fn kind_of(path: &Path, forced: Option<InputKind>) -> InputKind {
    forced.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("xsd") => InputKind::Xsd,
        _ => InputKind::Xml,
    })
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::new(ExitCode::Parse, format!("{}: {}", path.display(), e)))
}

fn source_id(path: &Path) -> String {
    path.display().to_string()
}

fn load_document(path: &Path) -> Result<XmlDocument, Failure> {
    let bytes = read_bytes(path)?;
    parse_xml(&bytes, &source_id(path))
        .map_err(|e| Failure::new(ExitCode::Parse, format!("{}:{}", path.display(), e)))
}

fn schema_failure(path: &Path, e: SchemaError) -> Failure {
    let code = match e.kind {
        SchemaErrorKind::Malformed => ExitCode::Parse,
        _ => ExitCode::Schema,
    };
    Failure::new(code, format!("{}:{}", path.display(), e))
}

fn infer_failure(e: InferError) -> Failure {
    Failure::new(ExitCode::Schema, e.to_string())
}

/// Infers a schema from `docs` and confirms every document validates against it.
fn infer_checked(docs: &[XmlDocument], schema_id: &str) -> Result<(SchemaModel, Vec<String>), Failure> {
    let inferred = infer_schema(docs, schema_id, InferOptions::default()).map_err(infer_failure)?;
    for d in docs {
        let report = validate(d, &inferred.schema);
        if !report.is_empty() {
            let first = report.violations.iter().map(|v| v.to_string()).next().unwrap_or_default();
            return Err(Failure::new(
                ExitCode::Invariant,
                format!("{}: does not validate against its inferred schema: {}", d.source_id, first),
            ));
        }
    }
    Ok((inferred.schema, inferred.warnings))
}

struct Loaded {
    schema: SchemaModel,
    document: Option<XmlDocument>,
    warnings: Vec<String>,
}

fn load(path: &Path, forced: Option<InputKind>) -> Result<Loaded, Failure> {
    match kind_of(path, forced) {
        InputKind::Xsd => {
            let bytes = read_bytes(path)?;
            let schema = read_schema(&bytes, &source_id(path)).map_err(|e| schema_failure(path, e))?;
            Ok(Loaded {
                schema,
                document: None,
                warnings: Vec::new(),
            })
        }
        InputKind::Xml => {
            let doc = load_document(path)?;
            let (schema, warnings) = infer_checked(std::slice::from_ref(&doc), &format!("{}.xsd", stem(path)?))?;
            Ok(Loaded {
                schema,
                document: Some(doc),
                warnings,
            })
        }
    }
}

fn graph_of(path: &Path, schema: &SchemaModel) -> Result<SchemaGraph, Failure> {
    build_xsg(schema).map_err(|e| Failure::new(ExitCode::Schema, format!("{}: {}", path.display(), e)))
}

fn invariant_failure(path: &Path, what: &str, errors: Vec<String>) -> Failure {
    Failure::new(
        ExitCode::Invariant,
        format!("{}: {} violates invariants: {}", path.display(), what, errors.join("; ")),
    )
}

fn abox_failure(e: AboxError) -> Failure {
    let code = match e {
        AboxError::Unmapped { .. } => ExitCode::Invariant,
        AboxError::NamingCollision { .. } | AboxError::Graph(_) => ExitCode::Schema,
    };
    Failure::new(code, e.to_string())
}

/// Writes `text` to `path` through a temporary file in the same directory,
/// so a failed run never leaves a truncated output behind.
pub(crate) fn write_atomic(path: &Path, text: &str) -> Result<(), Failure> {
    let fail = |e: std::io::Error| Failure::new(ExitCode::Parse, format!("{}: {}", path.display(), e));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(text.as_bytes()).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

/// Serialized files for one ontology, as (extension, contents).
fn serializations(o: &OntologyModel, format: Format, prefix: &str) -> Vec<(String, String)> {
    let mut out = Vec::new();
    if matches!(format, Format::Turtle | Format::Both) {
        out.push((format!("{}ttl", prefix), serialize_turtle(o)));
    }
    if matches!(format, Format::Rdfxml | Format::Both) {
        out.push((format!("{}rdf", prefix), serialize_rdfxml(o)));
    }
    out
}

/// Runs the full pipeline for one input and writes its outputs.
pub fn generate_source(path: &Path, cfg: &RunConfig) -> Result<SourceReport, Failure> {
    let name = stem(path)?;
    let base = cfg.source_iri(path)?;
    let loaded = load(path, cfg.input_kind)?;
    let mut warnings = loaded.warnings;
    let graph = graph_of(path, &loaded.schema)?;
    warnings.extend(graph.warnings.iter().cloned());

    let opts = GenOptions {
        base_iri: base.clone(),
        emit_cardinality: cfg.with_cardinality,
        union_domains: !cfg.literal_domains,
        strict_dl: cfg.strict_dl,
    };
    let generated = generate_tbox(&loaded.schema, &graph, &opts);
    warnings.extend(generated.warnings.iter().cloned());
    let tbox = generated.ontology;
    check_invariants(&tbox, None).map_err(|e| invariant_failure(path, "ontology", e))?;
    warnings.extend(check_dl_profile(&tbox));

    let mut files: Vec<(String, String)> = Vec::new();
    let mut individuals = 0;
    let instances = match (&loaded.document, cfg.with_instances) {
        (Some(doc), true) => {
            let naming = match cfg.naming {
                Naming::Id => IndividualNaming::IdAttribute,
                Naming::Path => IndividualNaming::PathOrdinal,
            };
            let full = populate(doc, &loaded.schema, &tbox, &generated.trace, naming).map_err(abox_failure)?;
            check_invariants(&full, None).map_err(|e| invariant_failure(path, "populated ontology", e))?;
            individuals = full.individuals.len();
            Some(full)
        }
        (None, true) => {
            warnings.push(format!("{}: schema input has no instances to populate", path.display()));
            None
        }
        _ => None,
    };

    match instances {
        Some(full) if cfg.split_abox => {
            let mut abox = OntologyModel::new(&format!("{}-instances", base));
            abox.namespace = tbox.namespace.clone();
            abox.imports.push(tbox.ontology_iri.clone());
            abox.individuals = full.individuals;
            check_invariants(&abox, Some(&tbox)).map_err(|e| invariant_failure(path, "instance ontology", e))?;
            files.extend(serializations(&tbox, cfg.format, ""));
            files.extend(serializations(&abox, cfg.format, "abox."));
        }
        Some(full) => files.extend(serializations(&full, cfg.format, "")),
        None => files.extend(serializations(&tbox, cfg.format, "")),
    }
    if cfg.emit_schema {
        files.push(("xsd".to_string(), serialize_schema(&loaded.schema)));
    }
    if cfg.emit_dot {
        files.push(("dot".to_string(), to_dot(&graph)));
    }
    if cfg.emit_trace {
        files.push(("trace.tsv".to_string(), write_trace(&generated.trace)));
    }

    for w in &warnings {
        log::warn!("{}: {}", path.display(), w);
    }
    let mut outputs = Vec::new();
    for (ext, text) in files {
        let out = cfg.out_dir.join(format!("{}.{}", name, ext));
        write_atomic(&out, &text)?;
        log::info!("wrote {}", out.display());
        outputs.push(out);
    }
    Ok(SourceReport {
        input: path.to_path_buf(),
        classes: tbox.classes.len(),
        object_properties: tbox.object_properties.len(),
        datatype_properties: tbox.datatype_properties.len(),
        individuals,
        warnings,
        outputs,
    })
}

/// Infers one schema from all `inputs` and returns it serialized.
pub fn infer_sources(inputs: &[PathBuf]) -> Result<String, Failure> {
    let first = inputs
        .first()
        .ok_or_else(|| Failure::new(ExitCode::Usage, "no input files"))?;
    let docs = inputs.iter().map(|p| load_document(p)).collect::<Result<Vec<_>, _>>()?;
    let (schema, warnings) = infer_checked(&docs, &format!("{}.xsd", stem(first)?))?;
    for w in &warnings {
        log::warn!("{}", w);
    }
    Ok(serialize_schema(&schema))
}

/// DOT text and a one-line summary of the schema graph of `input`.
pub fn graph_source(input: &Path, kind: Option<InputKind>) -> Result<(String, String), Failure> {
    let loaded = load(input, kind)?;
    let graph = graph_of(input, &loaded.schema)?;
    for w in loaded.warnings.iter().chain(&graph.warnings) {
        log::warn!("{}: {}", input.display(), w);
    }
    let summary = format!(
        "{} vertices, {} edges, {} roots, {} back edges",
        graph.vertices.len(),
        graph.edges.len(),
        graph.roots.len(),
        graph.back_edges.len()
    );
    Ok((to_dot(&graph), summary))
}
