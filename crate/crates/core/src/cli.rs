//! Command-line front end: every command loads a scenario file and prints one
//! JSON report on standard output.
//!
//! Exit codes: `0` success, `2` a check ran and failed, `1` bad input.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::convex::{bipolar_member, mazur_project, separate, GeneratedSet, ProjectionMethod};
use crate::duality::{conjugate, represent, SolverOptions};
use crate::error::{Error, Result};
use crate::lpmod::{DualElement, Position};
use crate::prob::SubAlgebra;
use crate::randvar::{ExtRandVar, RandVar};
use crate::risk::{check_axioms, Axiom};
use crate::scenario::Scenario;

pub const SCHEMA_VERSION: u64 = 1;
pub const THREADS_ENV: &str = "CONDRISK_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "condrisk", version, about = "Conditional convex risk measures: evaluation, duality and convex-analysis checks")]
pub struct Cli {
    /// Scenario JSON file.
    #[arg(long, short = 's', global = true)]
    pub scenario: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Risk value per conditioning block.
    Eval { risk: String, position: String },
    /// Solve the dual problem and certify the duality gap.
    DualVerify {
        risk: String,
        position: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Penalty (Fenchel conjugate) of a dual element given as a position.
    Penalty { risk: String, z: String },
    /// Randomized axiom check.
    Axioms {
        risk: String,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Project a position onto the cc-convex hull of a family.
    Mazur {
        position: String,
        #[arg(long, value_delimiter = ',', required = true)]
        family: Vec<String>,
        #[arg(long)]
        eps: f64,
        /// Norm exponent used to report distances.
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Separate a position from the cc-convex hull of a set.
    Separate {
        position: String,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
    },
    /// Bipolar membership per block.
    Bipolar {
        position: String,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
        #[arg(long)]
        one_sided: bool,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Sizes the global thread pool from `CONDRISK_THREADS`, if set.
pub fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v == f64::INFINITY {
        json!("inf")
    } else if v == f64::NEG_INFINITY {
        json!("-inf")
    } else {
        Value::Null
    }
}

fn rows(x: &Position, atoms: &[usize]) -> Value {
    Value::Array(atoms.iter().map(|&a| Value::Array(x.row(a).iter().map(|&v| num(v)).collect())).collect())
}

fn labels(f: &SubAlgebra, b: usize) -> Value {
    json!(f.block(b).iter().map(|&a| f.space().label(a)).collect::<Vec<_>>())
}

/// One entry per block: atom labels plus the fields produced by `fill`.
fn blocks(f: &SubAlgebra, fill: impl Fn(usize, &mut Map<String, Value>)) -> Value {
    Value::Array(
        (0..f.num_blocks())
            .map(|b| {
                let mut m = Map::new();
                m.insert("block".into(), json!(b));
                m.insert("atoms".into(), labels(f, b));
                fill(b, &mut m);
                Value::Object(m)
            })
            .collect(),
    )
}

fn block_num(v: &RandVar, f: &SubAlgebra, b: usize) -> Value {
    num(v.block_value(f, b))
}

fn block_ext(v: &ExtRandVar, f: &SubAlgebra, b: usize) -> Value {
    num(v.block_value(f, b))
}

fn report(command: &str, mut body: Map<String, Value>) -> String {
    body.insert("schema_version".into(), json!(SCHEMA_VERSION));
    body.insert("command".into(), json!(command));
    let mut text = serde_json::to_string_pretty(&Value::Object(body)).expect("serializable");
    text.push('\n');
    text
}

fn error_report(e: &Error) -> String {
    let mut err = Map::new();
    err.insert("kind".into(), json!(e.kind()));
    err.insert("message".into(), json!(e.to_string()));
    if let Error::Schema { pointer, .. } = e {
        err.insert("pointer".into(), json!(pointer));
    }
    let mut body = Map::new();
    body.insert("schema_version".into(), json!(SCHEMA_VERSION));
    body.insert("error".into(), Value::Object(err));
    let mut text = serde_json::to_string_pretty(&Value::Object(body)).expect("serializable");
    text.push('\n');
    text
}

fn positions(sc: &Scenario, names: &[String]) -> Result<Vec<Position>> {
    names.iter().map(|n| sc.position(n).cloned()).collect()
}

fn execute(sc: &Scenario, command: &Command) -> Result<(i32, String)> {
    let f = &sc.f;
    match command {
        Command::Eval { risk, position } => {
            let rho = sc.risk(risk)?;
            let x = sc.position(position)?;
            let value = rho.eval(x)?;
            let mut body = Map::new();
            body.insert("risk".into(), json!(risk));
            body.insert("position".into(), json!(position));
            body.insert("blocks".into(), blocks(f, |b, m| {
                m.insert("value".into(), block_num(&value, f, b));
            }));
            Ok((EXIT_OK, report("eval", body)))
        }
        Command::DualVerify { risk, position, tol } => {
            let rho = sc.risk(risk)?;
            let x = sc.position(position)?;
            let opts = SolverOptions {
                tol: *tol,
                ..SolverOptions::default()
            };
            let r = represent(rho, x, &opts)?;
            let mut body = Map::new();
            body.insert("risk".into(), json!(risk));
            body.insert("position".into(), json!(position));
            body.insert("tolerance".into(), num(r.tolerance));
            body.insert("iterations".into(), json!(r.iterations));
            body.insert("max_gap".into(), num(r.max_gap()));
            body.insert("certified".into(), json!(r.certified()));
            body.insert("blocks".into(), blocks(f, |b, m| {
                m.insert("x".into(), rows(&r.x, f.block(b)));
                m.insert("rho_value".into(), block_num(&r.rho_value, f, b));
                m.insert("dual_value".into(), block_num(&r.dual_value, f, b));
                m.insert("gap".into(), block_num(&r.gap, f, b));
                m.insert("argmax_z".into(), rows(r.argmax_z.position(), f.block(b)));
            }));
            let code = if r.certified() { EXIT_OK } else { EXIT_CHECK_FAILED };
            Ok((code, report("dual-verify", body)))
        }
        Command::Penalty { risk, z } => {
            let rho = sc.risk(risk)?;
            let dual = DualElement::new(sc.position(z)?.clone());
            let value = conjugate(rho, &dual)?;
            let admissible = dual.admissible_blocks(f)?;
            let mut body = Map::new();
            body.insert("risk".into(), json!(risk));
            body.insert("z".into(), json!(z));
            body.insert("blocks".into(), blocks(f, |b, m| {
                m.insert("admissible".into(), json!(admissible[b]));
                m.insert("value".into(), block_ext(&value, f, b));
            }));
            Ok((EXIT_OK, report("penalty", body)))
        }
        Command::Axioms { risk, trials, seed } => {
            let rho = sc.risk(risk)?;
            let r = check_axioms(rho, *trials, *seed)?;
            let counts: Map<String, Value> = Axiom::ALL.iter().map(|a| (a.name().to_string(), json!(r.count(*a)))).collect();
            let violations: Vec<Value> = r
                .violations
                .iter()
                .map(|v| json!({"axiom": v.axiom.name(), "trial": v.trial, "block": v.block, "excess": num(v.excess)}))
                .collect();
            let mut body = Map::new();
            body.insert("risk".into(), json!(risk));
            body.insert("trials".into(), json!(r.trials));
            body.insert("seed".into(), json!(r.seed));
            body.insert("passed".into(), json!(r.passed()));
            body.insert("violation_counts".into(), Value::Object(counts));
            body.insert("violations".into(), Value::Array(violations));
            let code = if r.passed() { EXIT_OK } else { EXIT_CHECK_FAILED };
            Ok((code, report("axioms", body)))
        }
        Command::Mazur { position, family, eps, p } => {
            let x = sc.position(position)?;
            let fam = positions(sc, family)?;
            let eps_rv = RandVar::constant(&sc.space, *eps);
            let r = mazur_project(&fam, x, f, &eps_rv, *p, ProjectionMethod::default())?;
            let mut body = Map::new();
            body.insert("position".into(), json!(position));
            body.insert("family".into(), json!(family));
            body.insert("eps".into(), num(*eps));
            body.insert("p".into(), num(*p));
            body.insert("certified".into(), json!(r.certified()));
            body.insert("blocks".into(), blocks(f, |b, m| {
                m.insert("distance".into(), block_num(&r.distance, f, b));
                m.insert("certified_lower_bound".into(), block_num(&r.certified_lower_bound, f, b));
                m.insert("weights".into(), Value::Array(r.weights[b].iter().map(|&w| num(w)).collect()));
                m.insert("projection".into(), rows(&r.z, f.block(b)));
                m.insert("no_approximant".into(), json!(r.no_approximant.iter().any(|n| n.block == b)));
            }));
            let code = if r.certified() { EXIT_OK } else { EXIT_CHECK_FAILED };
            Ok((code, report("mazur", body)))
        }
        Command::Separate { position, set } => {
            let x = sc.position(position)?;
            let k = GeneratedSet::cc_hull(positions(sc, set)?, f)?;
            let mut body = Map::new();
            body.insert("position".into(), json!(position));
            body.insert("set".into(), json!(set));
            match separate(&k, x) {
                Ok(cert) => {
                    let verified = cert.verify(&k, x)?;
                    body.insert("separable".into(), json!(true));
                    body.insert("verified".into(), json!(verified));
                    body.insert("blocks".into(), blocks(f, |b, m| {
                        m.insert("z".into(), rows(cert.z.position(), f.block(b)));
                        m.insert("eps".into(), block_num(&cert.eps, f, b));
                        m.insert("margin".into(), block_num(&cert.margin, f, b));
                        m.insert("support".into(), block_num(&cert.support, f, b));
                    }));
                    let code = if verified { EXIT_OK } else { EXIT_CHECK_FAILED };
                    Ok((code, report("separate", body)))
                }
                Err(Error::NotSeparable { block }) => {
                    body.insert("separable".into(), json!(false));
                    body.insert("inside_block".into(), json!(block));
                    Ok((EXIT_CHECK_FAILED, report("separate", body)))
                }
                Err(e) => Err(e),
            }
        }
        Command::Bipolar { position, set, one_sided } => {
            let x = sc.position(position)?;
            let d_set = GeneratedSet::cc_hull(positions(sc, set)?, f)?;
            let member = bipolar_member(&d_set, x, *one_sided)?;
            let mut body = Map::new();
            body.insert("position".into(), json!(position));
            body.insert("set".into(), json!(set));
            body.insert("one_sided".into(), json!(one_sided));
            body.insert("blocks".into(), blocks(f, |b, m| {
                m.insert("member".into(), json!(member[b]));
            }));
            Ok((EXIT_OK, report("bipolar", body)))
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let result = cli
        .scenario
        .as_ref()
        .ok_or_else(|| Error::BadParameter("--scenario <FILE> is required".into()))
        .and_then(Scenario::load)
        .and_then(|sc| execute(&sc, &cli.command));
    match result {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: EXIT_INPUT,
            stdout: error_report(&e),
            stderr: format!("error: {e}\n"),
        },
    }
}
