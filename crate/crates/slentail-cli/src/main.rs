//! `slentail`: command-line front end for the entailment checker.
//!
//! Exit codes: 0 Valid, 1 Invalid, 2 Unknown, 3 usage, parse or
//! validation error. With `--all`, the most severe code over all files.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use slentail::automata::{rotation_closure, sl2ta};
use slentail::entail::{check_entailment_with, prepare_query, Answer, AutomatonSize, Options, Verdict};
use slentail::frontend::{parse_file, parse_side, print_system, validate_system, Diagnostic, EntailmentQuery, SidFile};
use slentail::oracle::{OracleBounds, OracleOutcome};
use slentail::preprocess::{run_pipeline, PipelineArtifacts};
use slentail::slcore::Var;
use slentail::Error;

const EXIT_VALID: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "slentail", version, about = "Entailment checking for inductive separation-logic predicates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the query of a file, or of every `.sid` file in a directory.
    Check(CheckArgs),
    /// Compile `P(args)` to a tree automaton and print it.
    Compile(CompileArgs),
    /// Print the rotation closure of `P(args)` (defaults to the query's right side).
    Rotate(RotateArgs),
    /// Check the restrictions on every predicate of a file.
    Validate { file: PathBuf },
}

#[derive(Args)]
struct CheckArgs {
    /// Input file (omit with --all).
    file: Option<PathBuf>,
    /// Check every `.sid` file with a query in DIR, ordered by file name.
    #[arg(long, value_name = "DIR", conflicts_with = "file")]
    all: Option<PathBuf>,
    /// Replace the left side of the query.
    #[arg(long)]
    lhs: Option<String>,
    /// Replace the right side of the query.
    #[arg(long)]
    rhs: Option<String>,
    #[command(flatten)]
    common: Common,
    /// Run the bounded oracle for every query.
    #[arg(long)]
    oracle: bool,
    /// Oracle unfolding depth.
    #[arg(long, default_value_t = 4)]
    depth: usize,
    /// Oracle heap size bound.
    #[arg(long, default_value_t = 8)]
    cells: usize,
    /// Use the plain subset construction instead of antichains.
    #[arg(long)]
    naive_inclusion: bool,
}

#[derive(Args)]
struct CompileArgs {
    file: PathBuf,
    #[arg(long)]
    pred: String,
    /// Comma-separated actual parameters.
    #[arg(long, value_delimiter = ',')]
    args: Vec<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct RotateArgs {
    file: PathBuf,
    #[arg(long, requires = "args")]
    pred: Option<String>,
    #[arg(long, value_delimiter = ',')]
    args: Vec<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Print the system after a preprocessing stage (repeatable).
    #[arg(long, value_enum)]
    dump_stage: Vec<Stage>,
    /// Print the automata.
    #[arg(long)]
    emit_ta: bool,
    /// Report per-stage timings in microseconds.
    #[arg(long)]
    timings: bool,
    #[arg(long, value_enum, default_value_t = Format::Kv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Stage {
    Eq,
    Split,
    Elim,
    Sig,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Kv,
    Json,
}

/// A failure reported on stderr, already located.
struct Failure(Vec<String>);

impl Failure {
    fn new(file: &Path, err: &Error, src: Option<&str>) -> Failure {
        let name = file.display();
        match err {
            Error::Syntax { .. } | Error::UnknownPredicate { .. } | Error::ArityMismatch { .. } => {
                Failure(vec![format!("{name}:{err}")])
            }
            Error::ValidationFailed(diags) => Failure(diags.iter().map(|d| locate(file, d, src)).collect()),
            _ => Failure(vec![format!("{name}:1:1: {err}")]),
        }
    }
}

/// `file:line:col` of the definition a diagnostic refers to.
fn locate(file: &Path, d: &Diagnostic, src: Option<&str>) -> String {
    let (line, col) = src.and_then(|s| definition_position(s, &d.pred)).unwrap_or((1, 1));
    format!("{}:{line}:{col}: {d}", file.display())
}

fn definition_position(src: &str, pred: &str) -> Option<(usize, usize)> {
    src.lines().enumerate().find_map(|(i, l)| {
        let col = l.find(pred)?;
        let rest = l[col + pred.len()..].trim_start();
        let at_word_start = l[..col].chars().last().is_none_or(|c| !c.is_alphanumeric() && c != '_');
        (at_word_start && rest.starts_with('(') && l.contains("::=")).then(|| (i + 1, col + 1))
    })
}

fn read(file: &Path) -> Result<(String, SidFile), Failure> {
    let src = fs::read_to_string(file).map_err(|e| Failure(vec![format!("{}: {e}", file.display())]))?;
    let parsed = parse_file(&src).map_err(|e| Failure::new(file, &e, Some(&src)))?;
    Ok((src, parsed))
}

fn vars(args: &[String]) -> Vec<Var> {
    args.iter().map(|a| Var::named(a.trim())).collect()
}

fn kv_size(s: AutomatonSize) -> String {
    format!("{}/{}", s.states, s.transitions)
}

fn json_size(s: AutomatonSize) -> Value {
    json!({ "states": s.states, "transitions": s.transitions })
}

fn micros(d: Duration) -> u128 {
    d.as_micros()
}

/// Stage dumps for one pipeline run, each under a `# label stage` header.
fn dumps(label: &str, art: &PipelineArtifacts, stages: &[Stage]) -> String {
    let mut out = String::new();
    for stage in stages {
        let (name, body) = match stage {
            Stage::Eq => ("eq", print_system(&art.after_equalities)),
            Stage::Split => ("split", print_system(&art.after_split)),
            Stage::Elim => ("elim", print_system(&art.processed)),
            Stage::Sig => ("sig", signatures(art)),
        };
        let _ = writeln!(out, "# {label} {name}");
        out.push_str(&body);
    }
    out
}

fn signatures(art: &PipelineArtifacts) -> String {
    let set = |s: &BTreeSet<usize>| s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
    art.signatures
        .iter()
        .map(|(p, s)| format!("{p}: fw={{{}}} bw={{{}}} eq={{{}}}\n", set(&s.fw), set(&s.bw), set(&s.eq)))
        .collect()
}

fn exit_of(answer: Answer) -> u8 {
    match answer {
        Answer::Valid => EXIT_VALID,
        Answer::Invalid => EXIT_INVALID,
        Answer::Unknown => EXIT_UNKNOWN,
    }
}

/// Output of one checked file: text for stdout and stderr, and an exit code.
struct Report {
    stdout: String,
    stderr: String,
    code: u8,
}

impl Report {
    fn failed(f: Failure) -> Report {
        Report { stdout: String::new(), stderr: f.0.iter().map(|l| format!("{l}\n")).collect(), code: EXIT_ERROR }
    }
}

fn query_of(file: &Path, parsed: &SidFile, a: &CheckArgs) -> Result<EntailmentQuery, Failure> {
    let side =
        |text: &str| parse_side(text).map_err(|e| Failure(vec![format!("{}: in query override: {e}", file.display())]));
    let base = parsed.query.clone();
    let lhs = match (&a.lhs, &base) {
        (Some(t), _) => side(t)?,
        (None, Some(q)) => q.lhs.clone(),
        (None, None) => return Err(Failure(vec![format!("{}: no query in file and no --lhs", file.display())])),
    };
    let rhs = match (&a.rhs, &base) {
        (Some(t), _) => side(t)?,
        (None, Some(q)) => q.rhs.clone(),
        (None, None) => return Err(Failure(vec![format!("{}: no query in file and no --rhs", file.display())])),
    };
    Ok(EntailmentQuery { lhs, rhs })
}

fn check_file(file: &Path, a: &CheckArgs, label: Option<&str>) -> Report {
    let (src, parsed) = match read(file) {
        Ok(x) => x,
        Err(f) => return Report::failed(f),
    };
    let q = match query_of(file, &parsed, a) {
        Ok(q) => q,
        Err(f) => return Report::failed(f),
    };
    let opts = Options {
        antichain: !a.naive_inclusion,
        always_oracle: a.oracle,
        oracle_on_unknown: true,
        oracle_bounds: OracleBounds { depth: a.depth, cells: a.cells },
    };
    let mut stdout = String::new();
    if !a.common.dump_stage.is_empty() || a.common.emit_ta {
        match extras(&parsed, &q, &a.common) {
            Ok(text) => stdout.push_str(&text),
            Err(e) => return Report::failed(Failure::new(file, &e, Some(&src))),
        }
    }
    let v = match check_entailment_with(&parsed.system, &q, &opts) {
        Ok(v) => v,
        Err(e) => return Report::failed(Failure::new(file, &e, Some(&src))),
    };
    let mut stderr = String::new();
    let mut code = exit_of(v.answer);
    if let (Answer::Valid, Some(OracleOutcome::CounterModel(s))) = (v.answer, &v.oracle) {
        let _ = writeln!(stderr, "{}: oracle disagrees with Valid: {s}", file.display());
        code = EXIT_ERROR;
    }
    match a.common.format {
        Format::Kv => stdout.push_str(&kv_report(&v, label, a.common.timings)),
        Format::Json => stdout.push_str(&json_report(&v, &q, label, a.common.timings).to_string()),
    }
    stdout.push('\n');
    Report { stdout, stderr, code }
}

/// Stage dumps and automata for both sides of a query.
fn extras(parsed: &SidFile, q: &EntailmentQuery, c: &Common) -> Result<String, Error> {
    let p = prepare_query(&parsed.system, q)?;
    let mut out = String::new();
    let mut closed = None;
    for (label, call) in [("lhs", &p.lhs), ("rhs", &p.rhs)] {
        let art = run_pipeline(&p.system, &call.pred, &call.args)?;
        out.push_str(&dumps(label, &art, &c.dump_stage));
        if c.emit_ta {
            let ta = sl2ta(&art)?;
            let _ = write!(out, "# {label} automaton\n{ta}");
            if label == "rhs" {
                closed = Some(rotation_closure(&ta, &art.parameters.iter().cloned().collect()));
            }
        }
    }
    if let Some(rot) = closed {
        let _ = write!(out, "# rot automaton\n{rot}");
    }
    Ok(out)
}

fn oracle_kv(o: &OracleOutcome) -> String {
    match o {
        OracleOutcome::Holds { models_checked } => format!("oracle=Holds models={models_checked}"),
        OracleOutcome::CounterModel(s) => format!("oracle=CounterModel countermodel=\"{s}\""),
        OracleOutcome::Inconclusive { models_checked, reason } => {
            format!("oracle=Inconclusive models={models_checked} reason=\"{reason}\"")
        }
    }
}

fn oracle_json(o: &OracleOutcome) -> Value {
    match o {
        OracleOutcome::Holds { models_checked } => json!({ "outcome": "Holds", "models_checked": models_checked }),
        OracleOutcome::CounterModel(s) => json!({ "outcome": "CounterModel", "countermodel": s.to_string() }),
        OracleOutcome::Inconclusive { models_checked, reason } => {
            json!({ "outcome": "Inconclusive", "models_checked": models_checked, "reason": reason })
        }
    }
}

fn kv_report(v: &Verdict, label: Option<&str>, timings: bool) -> String {
    let mut out = String::new();
    if let Some(l) = label {
        let _ = write!(out, "file={l} ");
    }
    let s = &v.stats;
    let _ = write!(out, "verdict={} lhs={} rhs={} rot={}", v.answer, kv_size(s.lhs), kv_size(s.rhs), kv_size(s.rot));
    if let Some(o) = &v.oracle {
        let _ = write!(out, " {}", oracle_kv(o));
    }
    if timings {
        let t: Vec<String> = s.stages.iter().map(|(n, d)| format!("{n}:{}", micros(*d))).collect();
        let _ = write!(out, " timings_us={} total_us={}", t.join(","), micros(s.elapsed));
    }
    out
}

fn json_report(v: &Verdict, q: &EntailmentQuery, label: Option<&str>, timings: bool) -> Value {
    let s = &v.stats;
    let mut obj = json!({
        "query": q.to_string(),
        "verdict": v.answer.to_string(),
        "lhs": json_size(s.lhs),
        "rhs": json_size(s.rhs),
        "rot": json_size(s.rot),
        "rot_trimmed": json_size(s.rot_trimmed),
        "lhs_local": v.lhs_local,
        "rhs_local": v.rhs_local,
    });
    let map = obj.as_object_mut().expect("object literal");
    if let Some(l) = label {
        map.insert("file".into(), json!(l));
    }
    if let Some(o) = &v.oracle {
        map.insert("oracle".into(), oracle_json(o));
    }
    if timings {
        let t: serde_json::Map<String, Value> =
            s.stages.iter().map(|(n, d)| (n.to_string(), json!(micros(*d)))).collect();
        map.insert("timings_us".into(), Value::Object(t));
        map.insert("total_us".into(), json!(micros(s.elapsed)));
    }
    obj
}

fn check(a: &CheckArgs) -> Result<u8, Failure> {
    if let Some(dir) = &a.all {
        let entries = fs::read_dir(dir).map_err(|e| Failure(vec![format!("{}: {e}", dir.display())]))?;
        let mut files: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "sid"))
            .collect();
        files.sort();
        // library files without a query are skipped unless sides are given
        let files: Vec<PathBuf> = files
            .into_iter()
            .filter(|f| a.lhs.is_some() || fs::read_to_string(f).is_ok_and(|s| s.contains("entail")))
            .collect();
        let reports: Vec<Report> = files
            .par_iter()
            .map(|f| check_file(f, a, Some(&f.file_name().unwrap_or_default().to_string_lossy())))
            .collect();
        let code = reports.iter().map(|r| r.code).max().unwrap_or(EXIT_VALID);
        if a.common.format == Format::Json {
            let items: Vec<Value> = reports
                .iter()
                .filter(|r| !r.stdout.is_empty())
                .map(|r| serde_json::from_str(r.stdout.trim()).unwrap_or(Value::Null))
                .collect();
            println!("{}", Value::Array(items));
        }
        for r in &reports {
            if a.common.format == Format::Kv {
                print!("{}", r.stdout);
            }
            eprint!("{}", r.stderr);
        }
        return Ok(code);
    }
    let Some(file) = &a.file else {
        return Err(Failure(vec!["check: expected FILE or --all DIR".to_string()]));
    };
    let r = check_file(file, a, None);
    print!("{}", r.stdout);
    eprint!("{}", r.stderr);
    Ok(r.code)
}

/// Validates the system below `pred` and runs the pipeline on `pred(args)`.
fn pipeline_for(
    file: &Path,
    src: &str,
    parsed: &SidFile,
    pred: &str,
    args: &[Var],
) -> Result<PipelineArtifacts, Failure> {
    let Some(p) = parsed.system.get(pred) else {
        return Err(Failure(vec![format!("{}:1:1: unknown predicate `{pred}`", file.display())]));
    };
    if p.arity() != args.len() {
        return Err(Failure(vec![format!(
            "{}:1:1: `{pred}` expects {} arguments, got {}",
            file.display(),
            p.arity(),
            args.len()
        )]));
    }
    let diags = validate_system(&parsed.system.trimmed(pred));
    if !diags.is_empty() {
        return Err(Failure::new(file, &Error::ValidationFailed(diags), Some(src)));
    }
    run_pipeline(&parsed.system, pred, args).map_err(|e| Failure::new(file, &e, Some(src)))
}

fn emit_automaton(art: &PipelineArtifacts, c: &Common, rotate: bool, file: &Path, src: &str) -> Result<u8, Failure> {
    print!("{}", dumps("root", art, &c.dump_stage));
    let start = std::time::Instant::now();
    let ta = sl2ta(art).map_err(|e| Failure::new(file, &e, Some(src)))?;
    let ta = if rotate { rotation_closure(&ta, &art.parameters.iter().cloned().collect()) } else { ta };
    let elapsed = start.elapsed();
    let size = AutomatonSize::of(&ta);
    match c.format {
        Format::Kv => {
            print!("{ta}");
            let mut line = format!("size={} local={}", kv_size(size), art.is_local());
            if c.timings {
                let _ = write!(line, " total_us={}", micros(elapsed));
            }
            println!("{line}");
        }
        Format::Json => {
            let mut obj = json!({ "size": json_size(size), "local": art.is_local(), "automaton": ta.to_string() });
            if c.timings {
                obj.as_object_mut().expect("object literal").insert("total_us".into(), json!(micros(elapsed)));
            }
            println!("{obj}");
        }
    }
    Ok(EXIT_VALID)
}

fn compile(a: &CompileArgs) -> Result<u8, Failure> {
    let (src, parsed) = read(&a.file)?;
    let art = pipeline_for(&a.file, &src, &parsed, &a.pred, &vars(&a.args))?;
    emit_automaton(&art, &a.common, false, &a.file, &src)
}

fn rotate(a: &RotateArgs) -> Result<u8, Failure> {
    let (src, parsed) = read(&a.file)?;
    let art = match &a.pred {
        Some(pred) => pipeline_for(&a.file, &src, &parsed, pred, &vars(&a.args))?,
        None => {
            let Some(q) = &parsed.query else {
                return Err(Failure(vec![format!("{}: no query in file and no --pred", a.file.display())]));
            };
            let p = prepare_query(&parsed.system, q).map_err(|e| Failure::new(&a.file, &e, Some(&src)))?;
            let mut sys = parsed.clone();
            sys.system = p.system;
            pipeline_for(&a.file, &src, &sys, &p.rhs.pred, &p.rhs.args)?
        }
    };
    emit_automaton(&art, &a.common, true, &a.file, &src)
}

fn validate(file: &Path) -> Result<u8, Failure> {
    let (src, parsed) = read(file)?;
    let diags = validate_system(&parsed.system);
    if !diags.is_empty() {
        return Err(Failure::new(file, &Error::ValidationFailed(diags), Some(&src)));
    }
    if let Some(q) = &parsed.query {
        prepare_query(&parsed.system, q).map_err(|e| Failure::new(file, &e, Some(&src)))?;
    }
    println!("valid=true predicates={}", parsed.system.predicates.len());
    Ok(EXIT_VALID)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_VALID };
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Check(a) => check(a),
        Command::Compile(a) => compile(a),
        Command::Rotate(a) => rotate(a),
        Command::Validate { file } => validate(file),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(lines)) => {
            for l in lines {
                eprintln!("{l}");
            }
            ExitCode::from(EXIT_ERROR)
        }
    }
}
