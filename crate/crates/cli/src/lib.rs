//! Command-line pipeline: one local ontology per XML or XSD source.

mod pipeline;

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

pub use pipeline::{generate_source, graph_source, infer_sources, SourceReport};

pub const DEFAULT_BASE_IRI: &str = "http://example.org/onto";
pub const LOG_ENV: &str = "XSGOWL_LOG";

/// Process exit status. Several failing sources report the highest code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitCode {
    Success = 0,
    Usage = 1,
    /// Malformed XML or an unreadable input file.
    Parse = 2,
    /// Schema error, unsupported construct, or unusable input data.
    Schema = 3,
    /// A module invariant broke; always a bug.
    Invariant = 4,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: ExitCode,
    pub message: String,
}

impl Failure {
    pub fn new(code: ExitCode, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Turtle,
    Rdfxml,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum LogLevel {
    Quiet,
    #[default]
    Normal,
    Verbose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputKind {
    Xml,
    Xsd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Naming {
    /// `id` attribute value when present, else the ordinal path.
    #[default]
    Id,
    /// Always the ordinal path, e.g. `bibliography_1.biblioentry_2`.
    Path,
}

#[derive(Debug, Parser)]
#[command(name = "xsgowl", version, about = "Generate OWL-DL ontologies from XML documents and XML Schemas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Diagnostic verbosity; the XSGOWL_LOG environment variable takes precedence.
    #[arg(long, value_enum, global = true, default_value_t = LogLevel::Normal)]
    log_level: LogLevel,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the whole pipeline, writing one ontology per input.
    Generate(GenerateArgs),
    /// Infer an XML Schema from one or more instance documents.
    InferSchema(InferArgs),
    /// Write the schema graph of an XML or XSD input as Graphviz DOT.
    Graph(GraphArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, default_value = DEFAULT_BASE_IRI)]
    base_iri: String,
    #[arg(long, value_enum, default_value_t = Format::Turtle)]
    format: Format,
    /// Also write the (inferred or normalized) schema as `<stem>.xsd`.
    #[arg(long)]
    emit_schema: bool,
    /// Also write the schema graph as `<stem>.dot`.
    #[arg(long)]
    emit_dot: bool,
    /// Also write the mapping trace as `<stem>.trace.tsv`.
    #[arg(long)]
    emit_trace: bool,
    /// Populate individuals from XML inputs.
    #[arg(long)]
    with_instances: bool,
    /// Emit occurrence facets as cardinality restrictions.
    #[arg(long)]
    with_cardinality: bool,
    /// Use rdfs:Literal instead of xsd:anyType ranges.
    #[arg(long)]
    strict_dl: bool,
    /// One property per (domain, name) instead of union domains.
    #[arg(long)]
    literal_domains: bool,
    /// Write individuals to `<stem>.abox.*`, importing the TBox.
    #[arg(long)]
    split_abox: bool,
    #[arg(long, value_enum, default_value_t = Naming::Id)]
    naming: Naming,
    /// Treat every input as this kind instead of going by extension.
    #[arg(long, value_enum)]
    input_kind: Option<InputKind>,
}

#[derive(Debug, Args)]
struct InferArgs {
    /// Instance documents sharing one root element.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GraphArgs {
    input: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    input_kind: Option<InputKind>,
}

/// Settings for `generate`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub out_dir: PathBuf,
    pub base_iri: String,
    pub format: Format,
    pub emit_schema: bool,
    pub emit_dot: bool,
    pub emit_trace: bool,
    pub with_instances: bool,
    pub with_cardinality: bool,
    pub strict_dl: bool,
    pub literal_domains: bool,
    pub split_abox: bool,
    pub naming: Naming,
    pub input_kind: Option<InputKind>,
    pub log_level: LogLevel,
}

impl RunConfig {
    pub fn new(inputs: Vec<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            inputs,
            out_dir: out_dir.into(),
            base_iri: DEFAULT_BASE_IRI.to_string(),
            format: Format::Turtle,
            emit_schema: false,
            emit_dot: false,
            emit_trace: false,
            with_instances: false,
            with_cardinality: false,
            strict_dl: false,
            literal_domains: false,
            split_abox: false,
            naming: Naming::Id,
            input_kind: None,
            log_level: LogLevel::Normal,
        }
    }

    /// Checks invariants that clap cannot: absolute base IRI, unique stems.
    pub fn validate(&self) -> Result<(), Failure> {
        if self.inputs.is_empty() {
            return Err(Failure::new(ExitCode::Usage, "no input files"));
        }
        check_base_iri(&self.base_iri)?;
        let mut stems = std::collections::HashMap::new();
        for p in &self.inputs {
            let stem = stem(p)?;
            if let Some(prev) = stems.insert(stem.clone(), p) {
                return Err(Failure::new(
                    ExitCode::Usage,
                    format!(
                        "{} and {} would both write `{}` outputs",
                        prev.display(),
                        p.display(),
                        stem
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Base IRI of the ontology generated for `input`.
    pub fn source_iri(&self, input: &Path) -> Result<String, Failure> {
        Ok(format!("{}/{}", self.base_iri.trim_end_matches(['/', '#']), stem(input)?))
    }
}

pub(crate) fn stem(p: &Path) -> Result<String, Failure> {
    p.file_stem()
        .and_then(|s| s.to_str())
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .ok_or_else(|| Failure::new(ExitCode::Usage, format!("cannot derive an output name from {}", p.display())))
}

fn check_base_iri(iri: &str) -> Result<(), Failure> {
    match url::Url::parse(iri) {
        Ok(u) if !u.cannot_be_a_base() && u.fragment().is_none() => Ok(()),
        Ok(_) => Err(Failure::new(
            ExitCode::Usage,
            format!("base IRI `{}` must be hierarchical and have no fragment", iri),
        )),
        Err(e) => Err(Failure::new(ExitCode::Usage, format!("base IRI `{}` is not absolute: {}", iri, e))),
    }
}

fn init_logging(flag: LogLevel) -> Result<(), Failure> {
    let level = match std::env::var(LOG_ENV) {
        Ok(v) if !v.is_empty() => LogLevel::from_str(&v, true)
            .map_err(|_| Failure::new(ExitCode::Usage, format!("{}={} is not quiet, normal or verbose", LOG_ENV, v)))?,
        _ => flag,
    };
    let filter = match level {
        LogLevel::Quiet => log::LevelFilter::Error,
        LogLevel::Normal => log::LevelFilter::Warn,
        LogLevel::Verbose => log::LevelFilter::Debug,
    };
    // Repeated in-process runs keep the first logger; only the level moves.
    let _ = env_logger::Builder::new()
        .filter_level(log::LevelFilter::Trace)
        .format_timestamp(None)
        .format_target(false)
        .try_init();
    log::set_max_level(filter);
    Ok(())
}

fn report(code: ExitCode, message: &str) {
    let _ = writeln!(std::io::stderr(), "error: {}", message);
    log::debug!("exit code {}", code as i32);
}

/// Entry point shared by the binary and the tests. Returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ExitCode::Usage } else { ExitCode::Success };
            let _ = e.print();
            return code as i32;
        }
    };
    if let Err(f) = init_logging(cli.log_level) {
        report(f.code, &f.message);
        return f.code as i32;
    }
    let code = match cli.command {
        Command::Generate(a) => {
            let cfg = RunConfig {
                inputs: a.inputs,
                out_dir: a.out_dir,
                base_iri: a.base_iri,
                format: a.format,
                emit_schema: a.emit_schema,
                emit_dot: a.emit_dot,
                emit_trace: a.emit_trace,
                with_instances: a.with_instances,
                with_cardinality: a.with_cardinality,
                strict_dl: a.strict_dl,
                literal_domains: a.literal_domains,
                split_abox: a.split_abox,
                naming: a.naming,
                input_kind: a.input_kind,
                log_level: cli.log_level,
            };
            cmd_generate(&cfg)
        }
        Command::InferSchema(a) => cmd_infer_schema(&a.inputs, a.output.as_deref()),
        Command::Graph(a) => cmd_graph(&a.input, a.output.as_deref(), a.input_kind),
    };
    code as i32
}

pub fn cmd_generate(cfg: &RunConfig) -> ExitCode {
    if let Err(f) = cfg.validate() {
        report(f.code, &f.message);
        return f.code;
    }
    if let Err(e) = std::fs::create_dir_all(&cfg.out_dir) {
        report(ExitCode::Parse, &format!("{}: {}", cfg.out_dir.display(), e));
        return ExitCode::Parse;
    }
    let results: Vec<Result<SourceReport, Failure>> =
        cfg.inputs.par_iter().map(|p| generate_source(p, cfg)).collect();
    let mut worst = ExitCode::Success;
    let mut stdout = std::io::stdout().lock();
    for (input, r) in cfg.inputs.iter().zip(results) {
        match r {
            Ok(rep) => {
                let _ = writeln!(stdout, "{}", rep.summary_line());
            }
            Err(f) => {
                let _ = writeln!(stdout, "{}: failed (exit {})", input.display(), f.code as i32);
                report(f.code, &f.message);
                worst = worst.max(f.code);
            }
        }
    }
    worst
}

fn write_or_print(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => pipeline::write_atomic(p, text),
        None => {
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            Ok(())
        }
    }
}

pub fn cmd_infer_schema(inputs: &[PathBuf], output: Option<&Path>) -> ExitCode {
    let result = infer_sources(inputs).and_then(|text| write_or_print(output, &text));
    match result {
        Ok(()) => ExitCode::Success,
        Err(f) => {
            report(f.code, &f.message);
            f.code
        }
    }
}

pub fn cmd_graph(input: &Path, output: Option<&Path>, kind: Option<InputKind>) -> ExitCode {
    let result = graph_source(input, kind).and_then(|(dot, summary)| {
        write_or_print(output, &dot)?;
        if output.is_some() {
            println!("{}: {}", input.display(), summary);
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::Success,
        Err(f) => {
            report(f.code, &f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(inputs: &[&str]) -> RunConfig {
        RunConfig::new(inputs.iter().map(PathBuf::from).collect(), "out")
    }

    #[test]
    fn source_iri_appends_the_stem() {
        let mut c = cfg(&["dir/bib.xml"]);
        assert_eq!(c.source_iri(Path::new("dir/bib.xml")).unwrap(), "http://example.org/onto/bib");
        c.base_iri = "http://x.org/o/".into();
        assert_eq!(c.source_iri(Path::new("bib.xsd")).unwrap(), "http://x.org/o/bib");
    }

    #[test]
    fn base_iri_must_be_absolute_without_fragment() {
        let mut c = cfg(&["a.xml"]);
        assert!(c.validate().is_ok());
        for bad in ["relative/path", "urn:isbn:123", "http://x.org/o#frag", ""] {
            c.base_iri = bad.into();
            assert_eq!(c.validate().unwrap_err().code, ExitCode::Usage, "{}", bad);
        }
    }

    #[test]
    fn inputs_sharing_a_stem_are_rejected() {
        assert_eq!(cfg(&["a/x.xml", "b/x.xsd"]).validate().unwrap_err().code, ExitCode::Usage);
        assert!(cfg(&["a/x.xml", "b/y.xml"]).validate().is_ok());
        assert_eq!(cfg(&[]).validate().unwrap_err().code, ExitCode::Usage);
    }

    #[test]
    fn exit_codes_order_by_severity() {
        let worst = [ExitCode::Parse, ExitCode::Invariant, ExitCode::Schema].into_iter().max();
        assert_eq!(worst, Some(ExitCode::Invariant));
        assert_eq!(ExitCode::Schema as i32, 3);
    }

    #[test]
    fn help_and_version_exit_0() {
        assert_eq!(run(["xsgowl", "--version"]), 0);
        assert_eq!(run(["xsgowl", "generate", "--bogus"]), 1);
    }
}
