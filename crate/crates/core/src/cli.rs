//! Batch command runner behind the `gfmatroid` binary.
//!
//! [`run`] never panics on bad input: every failure becomes a JSON error
//! object with exit code 2 (bad input) or 1 (the analysis rejects the
//! instance).

use std::fmt;
use std::fs;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use crate::format::{parse_gfm, parse_graph, write_gfm, ParseError};
use crate::generators::{from_id, graphic, GenError};
use crate::gf::FieldSpec;
use crate::matroid::{Girth, MatroidError, RepMatroid};
use crate::pipeline::{density_ratio, verify_dichotomy, BasisMode, PipelineError};
use crate::setsystem::{SetSystem, SetSystemError, ShatterMode, SHATTER_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Deltas measured by `separation`.
pub const PACKING_DELTAS: [usize; 4] = [1, 2, 3, 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[derive(clap::ValueEnum)]
pub enum Command {
    Girth,
    Dual,
    Simplify,
    Shatter,
    Separation,
    Verify,
    Minor,
    Density,
    Gen,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Girth => "girth",
            Command::Dual => "dual",
            Command::Simplify => "simplify",
            Command::Shatter => "shatter",
            Command::Separation => "separation",
            Command::Verify => "verify",
            Command::Minor => "minor",
            Command::Density => "density",
            Command::Gen => "gen",
        }
    }
}

/// One invocation. `input` is `<path>.gfm`, `<path>.graph[@gf<q>]` or
/// `gen:<id>` (for `gen` the prefix is optional).
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub input: String,
    /// Second instance for `minor`.
    pub target: Option<String>,
    /// `q` or `q:modulus-code`; the default field for graphs and generators.
    pub field: Option<String>,
    pub t: usize,
    /// `all` or `sample:<n>`.
    pub basis: String,
    pub seed: u64,
    /// Subset budget for the exact shatter search.
    pub budget: Option<u128>,
    /// Subset size for `shatter`.
    pub m: Option<usize>,
    /// Random subsets for a sampled `shatter` lower bound.
    pub trials: Option<usize>,
    /// JSON report destination; for `gen`, the `.gfm` destination.
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command, input: impl Into<String>) -> RunConfig {
        RunConfig {
            command,
            input: input.into(),
            target: None,
            field: None,
            t: 4,
            basis: "all".to_string(),
            seed: 0,
            budget: None,
            m: None,
            trials: None,
            out: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    /// Pretty-printed JSON ending in a newline.
    pub report: String,
}

#[derive(Debug)]
enum Failure {
    Input {
        kind: &'static str,
        message: String,
        position: Option<(usize, usize)>,
    },
    Rejected {
        kind: &'static str,
        message: String,
        certificate: Value,
    },
}

impl Failure {
    fn input(kind: &'static str, message: impl fmt::Display) -> Failure {
        Failure::Input {
            kind,
            message: message.to_string(),
            position: None,
        }
    }

    fn parse(e: ParseError) -> Failure {
        Failure::Input {
            kind: "parse",
            position: Some((e.line, e.column)),
            message: e.message,
        }
    }
}

impl From<MatroidError> for Failure {
    fn from(e: MatroidError) -> Failure {
        Failure::input("matroid", e)
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Failure {
        Failure::input("generator", e)
    }
}

impl From<SetSystemError> for Failure {
    fn from(e: SetSystemError) -> Failure {
        Failure::input("set_system", e)
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Failure {
        match e {
            PipelineError::NotCosimple(v) => Failure::Rejected {
                kind: "not_cosimple",
                message: format!("matroid is not cosimple: {v}"),
                certificate: serde_json::to_value(v).expect("serializable"),
            },
            PipelineError::NoCircuit => Failure::Rejected {
                kind: "no_circuit",
                message: e.to_string(),
                certificate: Value::Null,
            },
            PipelineError::UndefinedRatio => Failure::Rejected {
                kind: "undefined_ratio",
                message: e.to_string(),
                certificate: Value::Null,
            },
            other => Failure::input("pipeline", other),
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    instance: &'a str,
    result: T,
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Runs one command. The JSON report is also written to `config.out`
/// unless the command is `gen`, whose `out` receives the matrix.
pub fn run(config: &RunConfig) -> Outcome {
    let result = dispatch(config);
    let (code, report) = match result {
        Ok(v) => (
            EXIT_OK,
            pretty(&Envelope {
                command: config.command.name(),
                instance: &config.input,
                result: v,
            }),
        ),
        Err(f) => {
            let (code, error) = match f {
                Failure::Input {
                    kind,
                    message,
                    position,
                } => {
                    let mut e = json!({ "kind": kind, "message": message });
                    if let Some((line, column)) = position {
                        e["line"] = json!(line);
                        e["column"] = json!(column);
                    }
                    (EXIT_INPUT, e)
                }
                Failure::Rejected {
                    kind,
                    message,
                    certificate,
                } => (
                    EXIT_REJECTED,
                    json!({ "kind": kind, "message": message, "certificate": certificate }),
                ),
            };
            (
                code,
                pretty(&json!({
                    "command": config.command.name(),
                    "instance": config.input,
                    "error": error,
                })),
            )
        }
    };
    if config.command != Command::Gen {
        if let Some(path) = &config.out {
            if let Err(e) = fs::write(path, &report) {
                return Outcome {
                    code: EXIT_INPUT,
                    report: pretty(&json!({
                        "command": config.command.name(),
                        "instance": config.input,
                        "error": { "kind": "io", "message": format!("{}: {e}", path.display()) },
                    })),
                };
            }
        }
    }
    Outcome { code, report }
}

fn parse_field(spec: Option<&str>) -> Result<FieldSpec, Failure> {
    let Some(spec) = spec else {
        return Ok(FieldSpec::of_order(2).expect("GF(2)"));
    };
    let (q, code) = match spec.split_once(':') {
        Some((q, c)) => (q, Some(c)),
        None => (spec, None),
    };
    let bad = || Failure::input("field", format!("cannot parse field `{spec}`; expected q or q:modulus"));
    let q: u32 = q.trim().parse().map_err(|_| bad())?;
    let code = match code {
        Some(c) => Some(c.trim().parse::<u32>().map_err(|_| bad())?),
        None => None,
    };
    FieldSpec::of_order_with_code(q, code).map_err(|e| Failure::input("field", e))
}

fn parse_basis(spec: &str) -> Result<BasisMode, Failure> {
    if spec == "all" {
        return Ok(BasisMode::All);
    }
    spec.strip_prefix("sample:")
        .and_then(|n| n.parse().ok())
        .filter(|&n| n > 0)
        .map(BasisMode::Sample)
        .ok_or_else(|| Failure::input("basis", format!("expected `all` or `sample:<n>`, found `{spec}`")))
}

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input("io", format!("{path}: {e}")))
}

fn load(input: &str, field: &FieldSpec, seed: u64) -> Result<RepMatroid, Failure> {
    if let Some(id) = input.strip_prefix("gen:") {
        return Ok(from_id(id, field, seed)?);
    }
    if let Some((path, rest)) = input.rsplit_once('@').filter(|(p, _)| p.ends_with(".graph")) {
        let q: u32 = rest
            .strip_prefix("gf")
            .and_then(|q| q.parse().ok())
            .ok_or_else(|| Failure::input("input", format!("expected `@gf<q>` after graph path, found `@{rest}`")))?;
        let f = if q == field.order() {
            field.clone()
        } else {
            FieldSpec::of_order(q).map_err(|e| Failure::input("field", e))?
        };
        let g = parse_graph(&read(path)?).map_err(Failure::parse)?;
        return Ok(graphic(&g, &f));
    }
    if input.ends_with(".graph") {
        let g = parse_graph(&read(input)?).map_err(Failure::parse)?;
        return Ok(graphic(&g, field));
    }
    if input.ends_with(".gfm") {
        return parse_gfm(&read(input)?).map_err(Failure::parse);
    }
    Err(Failure::input(
        "input",
        format!("`{input}` is not a .gfm path, a .graph path or gen:<id>"),
    ))
}

#[derive(Serialize)]
struct Summary {
    field: String,
    elements: usize,
    rank: usize,
}

fn summary(m: &RepMatroid) -> Summary {
    Summary {
        field: m.field().to_string(),
        elements: m.len(),
        rank: m.rank(),
    }
}

fn dispatch(config: &RunConfig) -> Result<Value, Failure> {
    let field = parse_field(config.field.as_deref())?;
    if config.command == Command::Gen {
        let id = config.input.strip_prefix("gen:").unwrap_or(&config.input);
        let m = from_id(id, &field, config.seed)?;
        let mut v = json!({ "summary": summary(&m), "labels": m.labels() });
        if let Some(path) = &config.out {
            fs::write(path, write_gfm(&m)).map_err(|e| Failure::input("io", format!("{}: {e}", path.display())))?;
            v["out"] = json!(path.display().to_string());
        } else {
            v["gfm"] = json!(write_gfm(&m));
        }
        return Ok(v);
    }
    let m = load(&config.input, &field, config.seed)?;
    let value = match config.command {
        Command::Girth => {
            let circuit = m.shortest_circuit(None)?;
            let girth = circuit.as_ref().map_or(Girth::Infinite, |c| Girth::Finite(c.len()));
            json!({ "summary": summary(&m), "girth": girth, "circuit": circuit })
        }
        Command::Dual => {
            let d = m.dual();
            json!({ "summary": summary(&m), "dual": summary(&d), "gfm": write_gfm(&d) })
        }
        Command::Simplify => {
            let s = m.simplify();
            let loops = m.labels_of(&m.loops());
            let classes: Vec<Vec<&str>> = m
                .parallel_classes()
                .into_iter()
                .filter(|c| c.len() > 1)
                .map(|c| c.iter().map(|&i| m.label(i)).collect())
                .collect();
            json!({
                "summary": summary(&m),
                "simple": summary(&s),
                "loops": loops,
                "parallel_classes": classes,
                "gfm": write_gfm(&s),
            })
        }
        Command::Shatter => {
            let (sf, system) = set_system(&m)?;
            let size = config.m.unwrap_or(2.min(system.ground_len()));
            let mode = match config.trials {
                Some(trials) => ShatterMode::Sampled {
                    trials,
                    seed: config.seed,
                },
                None => ShatterMode::Exact {
                    budget: config.budget.unwrap_or(SHATTER_BUDGET),
                },
            };
            let value = system.shatter(size, mode)?;
            json!({
                "summary": summary(&m),
                "basis": sf.basis_order,
                "ground_size": system.ground_len(),
                "family_size": system.family_len(),
                "shatter": value,
            })
        }
        Command::Separation => {
            let (sf, system) = set_system(&m)?;
            let separation = system.separation()?;
            let packings = PACKING_DELTAS
                .iter()
                .map(|&d| system.packing_measurement(d))
                .collect::<Result<Vec<_>, _>>()?;
            json!({
                "summary": summary(&m),
                "basis": sf.basis_order,
                "ground_size": system.ground_len(),
                "family_size": system.family_len(),
                "separation": separation,
                "packings": packings,
                "adjacency": system.to_adjacency_text(),
            })
        }
        Command::Verify => {
            let mode = parse_basis(&config.basis)?;
            let report = verify_dichotomy(&m, &config.input, config.t, mode, config.seed)?;
            serde_json::to_value(report).expect("serializable")
        }
        Command::Minor => {
            let target_input = config
                .target
                .as_deref()
                .ok_or_else(|| Failure::input("input", "minor needs a target instance"))?;
            let target = load(target_input, &field, config.seed)?;
            let witness = m.has_minor(&target)?;
            json!({
                "target": target_input,
                "status": if witness.is_some() { "found" } else { "absent" },
                "witness": witness,
            })
        }
        Command::Density => {
            json!({ "summary": summary(&m), "density": density_ratio(&m)? })
        }
        Command::Gen => unreachable!("handled above"),
    };
    Ok(value)
}

fn set_system(m: &RepMatroid) -> Result<(crate::gfmatrix::StandardForm, SetSystem), Failure> {
    let basis: Vec<&str> = m.greedy_basis().into_iter().map(|i| m.label(i)).collect();
    let sf = m.standard_form(&basis)?;
    let system = SetSystem::build(&sf);
    Ok((sf, system))
}
