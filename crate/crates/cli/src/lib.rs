//! The `ftriad` command line. [`run`] does all the work so tests can drive
//! it without spawning a process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use ftriad::algebra::{builtin, check_axioms, classify_algebra, Cfa};
use ftriad::diagram::{evaluate, normalize_fgraph, parse_diagram, spider_signature, to_dot, to_dsl, AlgebraRegistry, Diagram};
use ftriad::entanglement::{catalog, catalog_entries, classify_state, Budget, CatalogEntry};
use ftriad::state::{parse_ket, PureState};
use ftriad::synthesis::{matrix_to_diagram, state_to_diagram, SynthesisResult, Trio};
use ftriad::tensor::{Tensor, ToleranceConfig};

/// Version of the JSON layout, written as the top-level `schema` field.
pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "ftriad", version, about = "Frobenius algebras, string diagrams and qutrit entanglement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: CliConfig,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug, clap::Args)]
pub struct CliConfig {
    /// Absolute and relative tolerance for every numerical check.
    #[arg(long, global = true, default_value_t = 1e-9, allow_negative_numbers = true)]
    pub tol: f64,
    /// Seed for randomized searches.
    #[arg(long, global = true, env = "FTRIAD_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Number of effects tried by classify-state.
    #[arg(long, global = true, default_value_t = 320, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl CliConfig {
    fn tolerance(&self) -> ToleranceConfig {
        ToleranceConfig::uniform(self.tol)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a diagram file (`-` or no argument reads stdin).
    Eval { file: Option<String> },
    /// Check the seven Frobenius law groups of a built-in or a JSON algebra file.
    Axioms { algebra: String },
    /// Classify a verified algebra as special, anti-special or intermediate.
    ClassifyAlgebra { algebra: String },
    /// Classify a tripartite qutrit state given as a ket or a catalog name.
    ClassifyState {
        state: String,
        /// Parameter vector for catalog families, as comma-separated complex entries.
        #[arg(long = "param", allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Replace every connected component of an F-graph by its spider normal form.
    Normalize {
        file: Option<String>,
        /// Algebra of the F-graph; inferred from its first node when omitted.
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Synthesize a 3x3 matrix (row-major, entries like `1`, `-0.5`, `2+1i`).
    ///
    /// Entries such as `-1+2i` that start with `-` but are not plain numbers
    /// must follow a `--` separator.
    SynthMatrix {
        #[arg(num_args = 9, required = true, allow_negative_numbers = true)]
        entries: Vec<String>,
    },
    /// Synthesize a qutrit state given as a ket.
    SynthState { ket: String },
    /// Named representative states.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    List,
    Show {
        name: String,
        #[arg(long = "param", allow_hyphen_values = true)]
        params: Vec<String>,
    },
}

#[derive(Debug)]
enum Failure {
    /// Bad invocation; exit code 2.
    Usage(String),
    /// Exit code 1.
    Domain { kind: String, message: String },
}

impl From<ftriad::Error> for Failure {
    fn from(e: ftriad::Error) -> Self {
        let debug = format!("{e:?}");
        let kind = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string();
        Failure::Domain { kind, message: e.to_string() }
    }
}

fn io_failure(what: &str, e: std::io::Error) -> Failure {
    Failure::Domain { kind: "Io".into(), message: format!("{what}: {e}") }
}

/// One command's result in each output format.
struct Report {
    json: Value,
    text: String,
    dot: Option<String>,
}

/// Parses `args` (including the program name) and runs one command.
/// Returns the exit code: 0 on success, 1 on a domain error, 2 on a usage
/// error.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            if code != 0 && wants_json(&args) {
                let _ = emit_error(out, Format::Json, &Failure::Usage(usage_message(&e)));
            } else if code == 0 {
                let _ = write!(out, "{}", e.render());
            } else {
                let _ = write!(err, "{}", e.render());
            }
            return code;
        }
    };
    let format = cli.config.format;
    let result = validate(&cli.config).and_then(|()| execute(&cli.command, &cli.config, stdin));
    let outcome = result.and_then(|report| render(report, &cli.command, format));
    match outcome {
        Ok(body) => {
            let _ = out.write_all(body.as_bytes());
            0
        }
        Err(f) => {
            let code = if matches!(f, Failure::Usage(_)) { 2 } else { 1 };
            let sink: &mut dyn Write = if format == Format::Json { out } else { err };
            let _ = emit_error(sink, format, &f);
            code
        }
    }
}

/// First line of clap's report without the `error: ` prefix.
fn usage_message(e: &clap::Error) -> String {
    let rendered = e.render().to_string();
    let line = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or_default();
    match line.strip_prefix("error: ") {
        Some(m) => m.to_string(),
        None => "a subcommand is required; see --help".to_string(),
    }
}

/// Whether a usage error should be reported as JSON. Mirrors the default
/// format, so only an explicit non-JSON format turns it off.
fn wants_json(args: &[OsString]) -> bool {
    let args: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut format = "json".to_string();
    for (i, a) in args.iter().enumerate() {
        if let Some(v) = a.strip_prefix("--format=") {
            format = v.to_string();
        } else if a == "--format" {
            if let Some(v) = args.get(i + 1) {
                format = v.clone();
            }
        }
    }
    format != "text" && format != "dot"
}

fn emit_error(sink: &mut dyn Write, format: Format, f: &Failure) -> std::io::Result<()> {
    let (kind, message) = match f {
        Failure::Usage(m) => ("Usage", m.as_str()),
        Failure::Domain { kind, message } => (kind.as_str(), message.as_str()),
    };
    if format == Format::Json {
        let v = json!({ "schema": SCHEMA, "error": message, "kind": kind });
        writeln!(sink, "{}", serde_json::to_string_pretty(&v).expect("plain JSON"))
    } else {
        writeln!(sink, "error: {message}")
    }
}

fn validate(config: &CliConfig) -> Result<(), Failure> {
    if !config.tolerance().is_valid() {
        return Err(Failure::Usage(format!("--tol must be finite and non-negative, got {}", config.tol)));
    }
    Ok(())
}

fn render(report: Report, command: &Command, format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Json => {
            let mut v = json!({ "schema": SCHEMA, "command": command_name(command) });
            if let (Value::Object(dst), Value::Object(src)) = (&mut v, report.json) {
                dst.extend(src);
            }
            format!("{}\n", serde_json::to_string_pretty(&v).expect("plain JSON"))
        }
        Format::Text => report.text,
        Format::Dot => report
            .dot
            .ok_or_else(|| Failure::Usage(format!("`{}` does not produce a diagram; use json or text", command_name(command))))?,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval { .. } => "eval",
        Command::Axioms { .. } => "axioms",
        Command::ClassifyAlgebra { .. } => "classify-algebra",
        Command::ClassifyState { .. } => "classify-state",
        Command::Normalize { .. } => "normalize",
        Command::SynthMatrix { .. } => "synth-matrix",
        Command::SynthState { .. } => "synth-state",
        Command::Catalog { action: CatalogAction::List } => "catalog list",
        Command::Catalog { action: CatalogAction::Show { .. } } => "catalog show",
    }
}

fn execute(command: &Command, config: &CliConfig, stdin: &mut dyn Read) -> Result<Report, Failure> {
    let tol = config.tolerance();
    match command {
        Command::Eval { file } => eval(&read_source(file.as_deref(), stdin)?),
        Command::Axioms { algebra } => axioms(&load_algebra(algebra)?, &tol),
        Command::ClassifyAlgebra { algebra } => {
            let f = load_algebra(algebra)?.verified(&tol)?;
            let class = classify_algebra(&f, &tol)?;
            let text = format!("{}: {} (bubble rank {})\n", f.name(), class.label, class.bubble_rank);
            Ok(Report { json: json!({ "algebra": f.name(), "class": class }), text, dot: None })
        }
        Command::ClassifyState { state, params } => {
            let s = resolve_state(&arg_or_stdin(state, stdin)?, params)?;
            let class = classify_state(&s, Budget::new(config.budget as usize), config.seed, &tol)?;
            let mut residuals = serde_json::Map::new();
            if let Some(w) = &class.witness {
                residuals.insert("witness".into(), json!(w.residual(&s)?));
            }
            if let Some(a) = &class.axioms {
                residuals.insert("axioms".into(), json!(a.worst_residual()));
            }
            let mut json = to_value(&class);
            json["state"] = json!(s.to_ket_string());
            json["residuals"] = Value::Object(residuals);
            let mut text = format!("{:?}", class.label);
            if let Some(r) = class.reason {
                write!(text, " ({r:?})").expect("string write");
            }
            writeln!(text, " after {} candidates", class.candidates_tried).expect("string write");
            Ok(Report { json, text, dot: None })
        }
        Command::Normalize { file, algebra } => {
            let d = parse(&read_source(file.as_deref(), stdin)?)?;
            let f = match algebra {
                Some(name) => AlgebraRegistry::with_builtins().algebra(name)?.clone(),
                None => infer_algebra(&d)?,
            };
            let n = normalize_fgraph(&d, &f)?;
            let json = json!({
                "algebra": f.name(),
                "diagram": to_dsl(&n),
                "signature": spider_signature(&d),
                "nodes": n.nodes().len(),
            });
            Ok(Report { json, text: format!("{}\n", to_dsl(&n)), dot: Some(to_dot(&n)) })
        }
        Command::SynthMatrix { entries } => {
            let values = entries.iter().map(|e| parse_complex(e)).collect::<Result<Vec<_>, _>>()?;
            let f = Tensor::new(vec![3, 3], values)?;
            Ok(synthesis_report(matrix_to_diagram(&f, &Trio::new(), &tol)?))
        }
        Command::SynthState { ket } => {
            let s = parse_ket(&arg_or_stdin(ket, stdin)?, 3)?;
            Ok(synthesis_report(state_to_diagram(&s, &Trio::new(), &tol, config.seed)?))
        }
        Command::Catalog { action: CatalogAction::List } => {
            let entries: Vec<Value> = catalog_entries().iter().map(entry_json).collect();
            let text = catalog_entries().iter().map(|e| format!("{:<10} {}\n", e.name, e.expression())).collect();
            Ok(Report { json: json!({ "entries": entries }), text, dot: None })
        }
        Command::Catalog { action: CatalogAction::Show { name, params } } => {
            let entry = catalog_entries()
                .iter()
                .find(|e| e.name == name)
                .ok_or_else(|| ftriad::Error::UnknownCatalogEntry(name.clone()))?;
            let mut json = entry_json(entry);
            let mut text = format!("{}\n", entry.expression());
            if entry.params.is_empty() || !params.is_empty() {
                let s = entry.instantiate(&parse_params(params)?)?;
                json["state"] = json!(s.to_ket_string());
                json["amplitudes"] = to_value(s.amplitudes());
                if !entry.params.is_empty() {
                    text = format!("{}\n", s.to_ket_string());
                }
            }
            Ok(Report { json, text, dot: None })
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize to JSON")
}

fn read_source(file: Option<&str>, stdin: &mut dyn Read) -> Result<String, Failure> {
    match file {
        None | Some("-") => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| io_failure("stdin", e))?;
            Ok(s)
        }
        Some(path) => std::fs::read_to_string(path).map_err(|e| io_failure(path, e)),
    }
}

fn arg_or_stdin(arg: &str, stdin: &mut dyn Read) -> Result<String, Failure> {
    if arg == "-" {
        read_source(None, stdin)
    } else {
        Ok(arg.to_string())
    }
}

fn parse(text: &str) -> Result<Diagram, Failure> {
    Ok(parse_diagram(text, &AlgebraRegistry::with_builtins())?)
}

/// A built-in algebra name, or a JSON file holding `name`, `dim`, `mu`,
/// `eta`, `delta` and `epsilon` with tensors as `{shape, data}`.
fn load_algebra(spec: &str) -> Result<Cfa, Failure> {
    if let Ok(f) = builtin(spec) {
        return Ok(f);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| io_failure(spec, e))?;
    let raw: Cfa = serde_json::from_str(&text)
        .map_err(|e| Failure::Domain { kind: "InvalidAlgebraFile".into(), message: format!("{spec}: {e}") })?;
    // Re-run the shape checks that deserialization skips.
    Ok(Cfa::new(raw.name(), raw.mu().clone(), raw.eta().clone(), raw.delta().clone(), raw.epsilon().clone())?)
}

fn infer_algebra(d: &Diagram) -> Result<Arc<Cfa>, Failure> {
    d.nodes().iter().find_map(|n| n.generator.algebra().cloned()).ok_or_else(|| Failure::Domain {
        kind: "NoAlgebra".into(),
        message: "diagram has no algebra nodes; pass --algebra".into(),
    })
}

fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    let v: Complex64 = s
        .trim()
        .parse()
        .map_err(|_| ftriad::Error::MalformedCoefficient(s.to_string()))?;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(ftriad::Error::MalformedCoefficient(s.to_string()).into());
    }
    Ok(v)
}

fn parse_params(params: &[String]) -> Result<Vec<Tensor>, Failure> {
    params
        .iter()
        .map(|p| {
            let v = p.split(',').map(parse_complex).collect::<Result<Vec<_>, _>>()?;
            Ok(Tensor::vector(&v)?)
        })
        .collect()
}

/// A ket expression when it contains `|`, otherwise a catalog name.
fn resolve_state(text: &str, params: &[String]) -> Result<PureState, Failure> {
    let text = text.trim();
    if text.contains('|') {
        Ok(parse_ket(text, 3)?)
    } else {
        Ok(catalog(text, &parse_params(params)?)?)
    }
}

fn entry_json(e: &CatalogEntry) -> Value {
    json!({ "name": e.name, "dim": e.dim, "params": e.params, "expression": e.expression() })
}

fn eval(text: &str) -> Result<Report, Failure> {
    let d = parse(text)?;
    let t = evaluate(&d);
    let mut json = json!({
        "inputs": d.input_dims(),
        "outputs": d.output_dims(),
        "tensor": to_value(&t),
    });
    let mut body = String::new();
    if let Some(c) = t.as_scalar() {
        json["scalar"] = json!([c.re, c.im]);
        writeln!(body, "{}", fmt_complex(c)).expect("string write");
    } else {
        writeln!(body, "shape {:?}", t.shape()).expect("string write");
        let strides = t.strides();
        for (flat, c) in t.data().iter().enumerate() {
            if c.norm() > 0.0 {
                let index: Vec<usize> = strides.iter().zip(t.shape()).map(|(s, d)| flat / s % d).collect();
                writeln!(body, "{index:?} {}", fmt_complex(*c)).expect("string write");
            }
        }
    }
    Ok(Report { json, text: body, dot: Some(to_dot(&d)) })
}

fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("{}{:+}i", c.re, c.im)
    }
}

fn axioms(f: &Cfa, tol: &ToleranceConfig) -> Result<Report, Failure> {
    let report = check_axioms(f, tol);
    let mut text = String::new();
    for l in &report.laws {
        writeln!(text, "{:<16} {:<4} {:.3e}", l.law.name(), if l.passed { "ok" } else { "FAIL" }, l.residual).expect("string write");
    }
    let json = json!({
        "passed": report.all_passed(),
        "worst_residual": report.worst_residual(),
        "report": to_value(&report),
    });
    Ok(Report { json, text, dot: None })
}

fn synthesis_report(r: SynthesisResult) -> Report {
    let text = format!("{}\nresidual {:.3e}, {} nodes\n", to_dsl(&r.diagram), r.residual, r.diagram.nodes().len());
    let dot = to_dot(&r.diagram);
    let mut json = to_value(&r);
    json["nodes"] = json!(r.diagram.nodes().len());
    Report { json, text, dot: Some(dot) }
}
