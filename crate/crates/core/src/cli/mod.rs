//! Batch interface: `validate`, `check`, `build` and `universe`.
//!
//! Exit codes: 0 holds or valid, 1 fails or invalid, 2 bad input or a cap
//! was hit, 3 a hypothesis could not be established.

pub mod document;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::complexes::{is_exact, null_homotopy, validate, ChainMap, Complex};
use crate::construct::{
    precover_bounded, preenvelope_bounded, x_injective_envelope, BuildVerifier, OracleCall, PrecoverStep,
    PreenvelopeStep,
};
use crate::error::{Error, Result};
use crate::exactalg::Ring;
use crate::lifting::{
    dg_x_injective, dg_x_projective, eps1_perp_homotopy, x_injective_complex, x_projective_complex, Status, Verdict,
};
use crate::xclass::{Caps, ComplexUniverse, Eps1Universe, ModuleUniverse, XClass};
use document::{chain_map_doc, complex_doc, load, module_map_doc, parse_value, to_json, Document};
use report::{homotopy_json, verdict_json};

pub const DEFAULT_BOUND: u64 = 8;
pub const DEFAULT_WINDOW: usize = 3;

#[derive(Parser, Debug)]
#[command(name = "homkit", version, about = "Checks and constructions for finite cochain complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a complex or chain map document is well formed.
    Validate { path: PathBuf },
    /// Run a checker and print a report.
    Check {
        kind: CheckKind,
        input: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Build a precover, preenvelope or envelope.
    Build {
        kind: BuildKind,
        input: PathBuf,
        #[command(flatten)]
        opts: Opts,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List a universe in enumeration order, one JSON value per line.
    Universe {
        kind: UniverseKind,
        #[arg(long)]
        ring: i64,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// all, zero, free, ann:p, pred:<regex> or pred0:<regex>.
    #[arg(long, default_value = "all")]
    pub class: String,
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    pub bound: u64,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    /// Allow a bound above 8 or a window above 3.
    #[arg(long)]
    pub unsafe_bound: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Exact,
    HomotopicZero,
    XInjective,
    XProjective,
    DgInjective,
    DgProjective,
    Eps1Perp,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildKind {
    Precover,
    Preenvelope,
    Envelope,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum UniverseKind {
    Modules,
    Complexes,
    Eps1,
}

/// Bad input: 2. Unestablished hypothesis: 3.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Hypothesis(_) | Error::Unsolvable(_) => 3,
        _ => 2,
    }
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Holds => 0,
        Status::Fails => 1,
        Status::HypothesisNotEstablished => 3,
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn emit(&mut self, v: &Value) {
        let _ = writeln!(self.out, "{}", serde_json::to_string_pretty(v).expect("json"));
    }
    fn line(&mut self, v: &Value) {
        let _ = writeln!(self.out, "{}", serde_json::to_string(v).expect("json"));
    }
    fn warn(&mut self, msg: &str) {
        let _ = writeln!(self.err, "warning: {msg}");
    }
    fn fail(&mut self, e: &Error) -> i32 {
        let _ = writeln!(self.err, "error: {e}");
        exit_code(e)
    }
}

pub fn main_entry() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os().map(|a| a.to_string_lossy().into_owned()), &mut stdout.lock(), &mut stderr.lock())
}

pub fn run<I: IntoIterator<Item = String>>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args: Vec<String> = args.into_iter().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let mut io = Io { out, err };
    let echo: Vec<String> = args.iter().skip(1).cloned().collect();
    match cli.command {
        Command::Validate { path } => cmd_validate(&path, &mut io),
        Command::Check { kind, input, opts } => cmd_check(kind, &input, &opts, &echo, &mut io),
        Command::Build { kind, input, opts, output } => cmd_build(kind, &input, &opts, output.as_deref(), &echo, &mut io),
        Command::Universe { kind, ring, opts } => cmd_universe(kind, ring, &opts, &mut io),
    }
}

fn settings(o: &Opts, io: &mut Io<'_>) -> Result<(XClass, Caps)> {
    let x: XClass = o.class.parse()?;
    let caps = Caps::from_env();
    if o.bound > DEFAULT_BOUND || o.window > DEFAULT_WINDOW {
        if !o.unsafe_bound {
            return Err(Error::CapExceeded(format!(
                "bound {} / window {} above the defaults {DEFAULT_BOUND} / {DEFAULT_WINDOW}; pass --unsafe-bound",
                o.bound, o.window
            )));
        }
        io.warn(&format!("running with bound {} and window {}; enumeration may be slow", o.bound, o.window));
    }
    Ok((x, caps))
}

fn within_window(c: &Complex, o: &Opts) -> Result<()> {
    if let Some((lo, hi)) = c.support() {
        let width = (hi - lo + 1) as usize;
        if width > o.window {
            return Err(Error::CapExceeded(format!("complex spans {width} degrees, window is {}", o.window)));
        }
    }
    Ok(())
}

fn load_complex(path: &Path) -> Result<Complex> {
    match load(path)? {
        Document::Complex(c) => {
            if let Some(k) = validate(&c)?.first_violation {
                return Err(Error::InvalidComplex(format!("d∘d != 0 at degree {k}")));
            }
            Ok(c)
        }
        Document::Map(_) => Err(Error::Parse("expected a complex, found a chain map".into())),
    }
}

fn load_map(path: &Path) -> Result<ChainMap> {
    match load(path)? {
        Document::Map(f) => {
            check_map(&f)?;
            Ok(f)
        }
        Document::Complex(_) => Err(Error::Parse("expected a chain map, found a complex".into())),
    }
}

fn check_map(f: &ChainMap) -> Result<()> {
    for c in [f.source(), f.target()] {
        if let Some(k) = validate(c)?.first_violation {
            return Err(Error::InvalidComplex(format!("d∘d != 0 at degree {k}")));
        }
    }
    if let Some(k) = f.first_noncommuting()? {
        return Err(Error::NotChainMap(format!("square at degree {k} does not commute")));
    }
    Ok(())
}

fn cmd_validate(path: &Path, io: &mut Io<'_>) -> i32 {
    let doc = match load(path) {
        Ok(d) => d,
        Err(e @ Error::Parse(_)) => return io.fail(&e),
        Err(e) => {
            io.emit(&json!({ "valid": false, "violation": e.to_string() }));
            return 1;
        }
    };
    let res = match &doc {
        Document::Complex(c) => validate(c).map(|v| v.first_violation.map(|k| format!("d∘d != 0 at degree {k}"))),
        Document::Map(f) => check_map(f).map(|_| None).or_else(|e| match e {
            Error::InvalidComplex(m) | Error::NotChainMap(m) => Ok(Some(m)),
            e => Err(e),
        }),
    };
    match res {
        Ok(None) => {
            io.emit(&json!({ "valid": true }));
            0
        }
        Ok(Some(v)) => {
            io.emit(&json!({ "valid": false, "violation": v }));
            1
        }
        Err(e) => io.fail(&e),
    }
}

fn report(echo: &[String], universe: &str, status: Status, body: Value, started: Instant) -> Value {
    let mut v = json!({
        "command": echo,
        "universe": universe,
        "status": to_json(&status),
    });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
        dst.extend(src);
    }
    v["elapsed_ms"] = json!(started.elapsed().as_millis() as u64);
    v
}

fn verdict_report(echo: &[String], v: &Verdict, started: Instant) -> Value {
    let mut body = verdict_json(v);
    if let Value::Object(m) = &mut body {
        m.remove("status");
        m.remove("universe");
    }
    report(echo, &v.universe, v.status, body, started)
}

fn cmd_check(kind: CheckKind, input: &Path, o: &Opts, echo: &[String], io: &mut Io<'_>) -> i32 {
    let started = Instant::now();
    let (x, caps) = match settings(o, io) {
        Ok(s) => s,
        Err(e) => return io.fail(&e),
    };
    let run = || -> Result<(Value, i32)> {
        if kind == CheckKind::HomotopicZero {
            let f = load_map(input)?;
            within_window(f.source(), o)?;
            within_window(f.target(), o)?;
            return Ok(match null_homotopy(&f)? {
                Some(h) => (report(echo, "none", Status::Holds, json!({ "evidence": homotopy_json(&h) }), started), 0),
                None => {
                    let ev = json!({ "kind": "not-null-homotopic", "map": to_json(&chain_map_doc(&f)) });
                    (report(echo, "none", Status::Fails, json!({ "evidence": ev }), started), 1)
                }
            });
        }
        let c = load_complex(input)?;
        within_window(&c, o)?;
        let v = match kind {
            CheckKind::Exact => {
                let rep = is_exact(&c)?;
                return Ok(match rep.first_nonexact() {
                    None => (report(echo, "none", Status::Holds, json!({ "evidence": { "kind": "exact" } }), started), 0),
                    Some(k) => {
                        let h = rep.homology.iter().find(|(d, _)| *d == k).map(|(_, h)| h.factors().to_vec());
                        let ev = json!({ "kind": "homology", "degree": k, "homology": h });
                        (report(echo, "none", Status::Fails, json!({ "evidence": ev }), started), 1)
                    }
                });
            }
            CheckKind::XInjective => x_injective_complex(&c, &x, &ComplexUniverse::around(&c, o.bound, &caps)?, &caps)?,
            CheckKind::XProjective => x_projective_complex(&c, &x, &ComplexUniverse::around(&c, o.bound, &caps)?, &caps)?,
            CheckKind::DgInjective => dg_x_injective(&c, &x, &Eps1Universe::around(&c, x.clone(), o.bound, &caps)?, &caps)?,
            CheckKind::DgProjective => {
                dg_x_projective(&c, &x, &Eps1Universe::around(&c, x.clone(), o.bound, &caps)?, &caps)?
            }
            CheckKind::Eps1Perp => eps1_perp_homotopy(&c, &Eps1Universe::around(&c, x.clone(), o.bound, &caps)?, &caps)?,
            CheckKind::HomotopicZero => unreachable!("handled above"),
        };
        Ok((verdict_report(echo, &v, started), status_code(v.status)))
    };
    match run() {
        Ok((v, code)) => {
            io.emit(&v);
            code
        }
        Err(e) => {
            if exit_code(&e) == 3 {
                let v = report(echo, "", Status::HypothesisNotEstablished, json!({ "error": e.to_string() }), started);
                io.emit(&v);
            }
            io.fail(&e)
        }
    }
}

fn calls_json(calls: &[OracleCall]) -> Value {
    calls
        .iter()
        .map(|c| {
            json!({
                "degree": c.degree,
                "oracle": c.oracle,
                "module": c.module.factors(),
                "approximation": c.approximation.factors(),
            })
        })
        .collect()
}

fn precover_steps(steps: &[PrecoverStep]) -> Value {
    steps
        .iter()
        .map(|s| {
            json!({
                "degree": s.degree,
                "a": to_json(&module_map_doc(&s.a)),
                "g": to_json(&module_map_doc(&s.g)),
                "f_next": to_json(&module_map_doc(&s.f_next)),
                "lambda_prev": to_json(&module_map_doc(&s.lambda_prev)),
                "lambda": to_json(&module_map_doc(&s.lambda)),
                "s1": to_json(&module_map_doc(&s.s1)),
                "s2": to_json(&module_map_doc(&s.s2)),
                "dropped": s.dropped,
            })
        })
        .collect()
}

fn preenvelope_steps(steps: &[PreenvelopeStep]) -> Value {
    steps
        .iter()
        .map(|s| {
            json!({
                "degree": s.degree,
                "a": to_json(&module_map_doc(&s.a)),
                "g_next": to_json(&module_map_doc(&s.g_next)),
                "f": to_json(&module_map_doc(&s.f)),
                "lambda": to_json(&module_map_doc(&s.lambda)),
                "s": to_json(&module_map_doc(&s.s)),
                "t": to_json(&module_map_doc(&s.t)),
            })
        })
        .collect()
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(dst), Value::Object(src)) = (&mut base, extra) {
        dst.extend(src);
    }
    base
}

/// Re-reads a serialized result and checks it is a valid chain map equal
/// to the one built.
fn revalidate(doc: &Value, built: &ChainMap) -> Result<bool> {
    match parse_value(doc, Path::new("."))? {
        Document::Map(f) => {
            check_map(&f)?;
            Ok(&f == built)
        }
        Document::Complex(_) => Ok(false),
    }
}

fn cmd_build(
    kind: BuildKind,
    input: &Path,
    o: &Opts,
    output: Option<&Path>,
    echo: &[String],
    io: &mut Io<'_>,
) -> i32 {
    let started = Instant::now();
    let (x, caps) = match settings(o, io) {
        Ok(s) => s,
        Err(e) => return io.fail(&e),
    };
    let y = match load_complex(input).and_then(|y| within_window(&y, o).map(|_| y)) {
        Ok(y) => y,
        Err(e) => return io.fail(&if exit_code(&e) == 3 { Error::Parse(e.to_string()) } else { e }),
    };
    let ring = y.ring();
    let run = || -> Result<(ChainMap, Value, i32, Vec<String>)> {
        let mut warnings = Vec::new();
        match kind {
            BuildKind::Precover | BuildKind::Preenvelope => {
                let u = ModuleUniverse::new(ring, o.bound, &caps)?;
                let mut verifier = BuildVerifier::new(ring, x.clone(), o.bound, caps)?;
                let (map, extra, rep) = if kind == BuildKind::Precover {
                    let r = precover_bounded(&y, &x, &u, &caps)?;
                    let rep = verifier.verify_precover(&y, &r)?;
                    let kernel: serde_json::Map<String, Value> =
                        r.kernel.iter().map(|(k, m)| (k.to_string(), json!(m.factors()))).collect();
                    let extra = json!({
                        "log": { "oracle_calls": calls_json(&r.oracle_calls), "steps": precover_steps(&r.steps) },
                        "kernel": kernel,
                    });
                    (r.map, extra, rep)
                } else {
                    let r = preenvelope_bounded(&y, &x, &u, &caps)?;
                    let rep = verifier.verify_preenvelope(&y, &r)?;
                    let coker: serde_json::Map<String, Value> =
                        r.cokernel.iter().map(|(k, m)| (k.to_string(), json!(m.factors()))).collect();
                    let extra = json!({
                        "log": { "oracle_calls": calls_json(&r.oracle_calls), "steps": preenvelope_steps(&r.steps) },
                        "cokernel": coker,
                    });
                    (r.map, extra, rep)
                };
                for c in rep.constraints.iter().filter(|c| !c.holds) {
                    warnings.push(format!("degree {}: constraint {} does not hold", c.degree, c.constraint));
                }
                let structural = rep.exact && rep.degreewise && rep.class_membership && rep.components && rep.factorization;
                let code = if structural { 0 } else { 1 };
                let extra = merge(extra, json!({ "verification": to_json(&rep) }));
                Ok((map, extra, code, warnings))
            }
            BuildKind::Envelope => {
                let Some(r) = x_injective_envelope(&y, &x, o.bound, &caps)? else {
                    return Err(Error::Hypothesis(format!("no subcomplex B <= A with A/B in C({x}); the zero module is not in the class")));
                };
                let ok = r.maximal && r.x_injective.holds() && r.factorization_failures.is_empty();
                let extra = json!({
                    "ambient": to_json(&complex_doc(&r.ambient)),
                    "hull": to_json(&complex_doc(&r.hull)),
                    "certificate": to_json(&r.certificate),
                    "maximal": r.maximal,
                    "x_injective": verdict_json(&r.x_injective),
                    "competitors": r.competitors,
                    "factorization_failures": r.factorization_failures,
                });
                Ok((r.inclusion, extra, if ok { 0 } else { 1 }, warnings))
            }
        }
    };
    let kind_name = match kind {
        BuildKind::Precover => "precover",
        BuildKind::Preenvelope => "preenvelope",
        BuildKind::Envelope => "envelope",
    };
    let (map, extra, mut code, warnings) = match run() {
        Ok(r) => r,
        Err(e) => {
            let v = json!({ "command": echo, "kind": kind_name, "status": "hypothesis-not-established", "error": e.to_string() });
            if exit_code(&e) == 3 {
                if let Some(p) = output {
                    let _ = std::fs::write(p, serde_json::to_string_pretty(&v).expect("json"));
                }
                io.emit(&v);
            }
            return io.fail(&e);
        }
    };
    for w in &warnings {
        io.warn(w);
    }
    let mut doc = merge(to_json(&chain_map_doc(&map)), json!({ "command": echo, "kind": kind_name }));
    doc = merge(doc, extra);
    doc["elapsed_ms"] = json!(started.elapsed().as_millis() as u64);
    match revalidate(&doc, &map) {
        Ok(true) => {}
        Ok(false) => {
            io.warn("serialized result does not re-read as the built map");
            code = 1;
        }
        Err(e) => return io.fail(&e),
    }
    match output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, serde_json::to_string_pretty(&doc).expect("json")) {
                return io.fail(&Error::Parse(format!("{}: {e}", p.display())));
            }
            match load(p) {
                Ok(Document::Map(f)) if f == map => {}
                _ => {
                    io.warn("written file does not re-read as the built map");
                    code = 1;
                }
            }
            io.emit(&json!({ "kind": kind_name, "output": p.display().to_string(), "exit": code }));
        }
        None => io.emit(&doc),
    }
    code
}

fn cmd_universe(kind: UniverseKind, ring: i64, o: &Opts, io: &mut Io<'_>) -> i32 {
    let (x, caps) = match settings(o, io) {
        Ok(s) => s,
        Err(e) => return io.fail(&e),
    };
    let run = || -> Result<Vec<Value>> {
        let ring = Ring::modular(ring)?;
        let mods = ModuleUniverse::new(ring, o.bound, &caps)?;
        let hi = o.window.max(1) as i32 - 1;
        Ok(match kind {
            UniverseKind::Modules => {
                mods.members().into_iter().filter(|m| x.contains_module(m)).map(|m| json!(m.factors())).collect()
            }
            UniverseKind::Complexes => ComplexUniverse::new(mods, 0, hi, o.bound.min(4), &caps)?
                .members()?
                .into_iter()
                .filter(|c| x.contains_complex(c))
                .map(|c| to_json(&complex_doc(&c)))
                .collect(),
            UniverseKind::Eps1 => Eps1Universe::new(mods, 0, hi, x.clone(), &caps)?
                .members(&caps)?
                .into_iter()
                .map(|c| to_json(&complex_doc(&c)))
                .collect(),
        })
    };
    match run() {
        Ok(lines) => {
            for l in &lines {
                io.line(l);
            }
            0
        }
        Err(e) => io.fail(&e),
    }
}
