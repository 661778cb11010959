//! Command-line front end.
//!
//! Every subcommand produces a JSON value and a text rendering; `--json`
//! selects the former. `check` exits with status 1 when any property fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::algebra::{AlgElem, CMatrix};
use crate::classical::{
    classical_cr, cyclic_order, fn_obstate_value, pairing, ratio, Extended, RP1Value,
};
use crate::crossratio::operator_cr;
use crate::error::{Error, Result};
use crate::exact::{self, ExactValue};
use crate::grassmann::SubspacePoint;
use crate::hermitian::{cayley_to_unitary, is_lagrangian, membership, unitary_to_point, unitary_torsor, Space};
use crate::io::{
    extended_to_json, load_classical_fn, load_matrix, load_measure, load_obstate, load_point, parse_extended,
    MatrixJson, PointJson,
};
use crate::obstate::{
    distribution, expectation, is_cyclically_ordered, is_positive, is_pure, pure_expectation, variance,
};
use crate::sweep::{run_sweep, Backend, SweepConfig, SweepReport, DEFAULT_DIMS, DEFAULT_TRIALS, SCHEMA};

#[derive(Debug, Parser)]
#[command(name = "matryoshka", version, about = "Projective line over M(n, C): obstates, cross-ratios and property sweeps")]
pub struct Cli {
    #[command(flatten)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Format {
    /// Machine-readable JSON output
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Human-readable text output (default)
    #[arg(long, global = true)]
    pub text: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expectation, variance, distribution, purity and positivity of an obstate JSON file
    Expect { path: PathBuf },
    /// Cross-ratio CR(a, b; c, d) of four extended reals or four point JSON files
    Crossratio {
        #[arg(required = true, num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true)]
        args: Vec<String>,
        #[arg(long, value_enum, default_value = "float")]
        backend: Backend,
    },
    /// Seeded property sweep over every invariant
    Check(CheckArgs),
    /// Operations of the commutative model on a finite set
    Classical {
        #[command(subcommand)]
        op: ClassicalOp,
    },
    /// Membership of a point JSON in R, R′ and R_NS
    Membership {
        path: PathBuf,
        /// One of R, Rprime, RNS; all three when omitted
        #[arg(long)]
        space: Option<Space>,
    },
    /// Cayley transform of a point of R_NS to U(n), or back with --inverse
    Cayley {
        path: PathBuf,
        /// Read a unitary matrix JSON and print its point
        #[arg(long)]
        inverse: bool,
    },
    /// Unitary torsor x ·_y z of three point JSON files in R_NS
    Torsor { x: PathBuf, y: PathBuf, z: PathBuf },
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// Dimensions to sweep
    #[arg(long = "n", value_delimiter = ',', num_args = 1.., default_values_t = DEFAULT_DIMS.to_vec())]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, env = "MATRYOSHKA_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Override every residual tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "float")]
    pub backend: Backend,
    /// Property id or namespace (repeatable or comma separated)
    #[arg(long, value_delimiter = ',')]
    pub property: Vec<String>,
}

impl From<&CheckArgs> for SweepConfig {
    fn from(a: &CheckArgs) -> Self {
        SweepConfig {
            n_list: a.n.clone(),
            trials: a.trials,
            seed: a.seed,
            tol: a.tol,
            properties: a.property.clone(),
            backend: a.backend,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum ClassicalOp {
    /// CR(a, b; c, d) of extended reals
    Cr {
        #[arg(num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true)]
        values: Vec<String>,
    },
    /// R(c, b, a) = (c − a)/(b − a)
    Ratio {
        #[arg(num_args = 3, value_names = ["C", "B", "A"], allow_negative_numbers = true)]
        values: Vec<String>,
    },
    /// Whether (a, b, c) is cyclically ordered
    Cyclic {
        #[arg(num_args = 3, value_names = ["A", "B", "C"], allow_negative_numbers = true)]
        values: Vec<String>,
    },
    /// Π_μ(f, g) for a measure and two functions (JSON or CSV)
    Pairing { measure: PathBuf, f: PathBuf, g: PathBuf },
    /// Pointwise obstate values CR(f, f₁; f₀, f_∞)
    Obstate { f: PathBuf, f1: PathBuf, f0: PathBuf, finf: PathBuf },
}

/// The result of a subcommand in both renderings.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub success: bool,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Self { json, text, success: true }
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{} {} {}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
    }
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn matrix_text(m: &CMatrix) -> String {
    (0..m.nrows())
        .map(|r| {
            let row: Vec<String> = (0..m.ncols()).map(|c| fmt_complex(m[(r, c)])).collect();
            format!("  [{}]", row.join(", "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn cmd_expect(path: &Path) -> Result<Outcome> {
    let o = load_obstate(path)?;
    let e = expectation(&o)?;
    let mut report = serde_json::Map::new();
    report.insert("schema".into(), json!(SCHEMA));
    report.insert("n".into(), json!(o.dim()));
    report.insert("strong".into(), json!(o.is_strong()));
    report.insert("expectation".into(), complex_json(e));
    let mut text = format!("expectation: {}\n", fmt_complex(e));
    if o.is_strong() {
        let v = variance(&o)?;
        let d = distribution(&o)?;
        report.insert("variance".into(), json!(v));
        report.insert(
            "distribution".into(),
            Value::Array(d.iter().map(|(l, p)| json!({ "value": l, "weight": p })).collect()),
        );
        text.push_str(&format!("variance: {v}\ndistribution:\n"));
        for (l, p) in &d {
            text.push_str(&format!("  {l}: {p}\n"));
        }
    }
    let pure = is_pure(&o);
    report.insert("pure".into(), json!(pure));
    report.insert("positive".into(), json!(is_positive(&o)));
    report.insert("cyclically_ordered".into(), json!(is_cyclically_ordered(&o)));
    text.push_str(&format!(
        "pure: {pure}\npositive: {}\ncyclically ordered: {}\n",
        is_positive(&o),
        is_cyclically_ordered(&o)
    ));
    if pure {
        if let Ok(pe) = pure_expectation(&o) {
            report.insert("pure_expectation".into(), complex_json(pe));
            text.push_str(&format!("pure expectation: {}\n", fmt_complex(pe)));
        }
    }
    Ok(Outcome::ok(Value::Object(report), text))
}

fn exact_extended(s: &str) -> Result<ExactValue> {
    if let Ok(q) = s.trim().parse::<num_rational::BigRational>() {
        return Ok(ExactValue::Finite(num_complex::Complex::new(q, num_traits::Zero::zero())));
    }
    match parse_extended(s)? {
        Extended::Infinity => Ok(ExactValue::Infinity),
        Extended::Finite(x) => Ok(ExactValue::Finite(num_complex::Complex::new(
            exact::from_f64(x)?,
            num_traits::Zero::zero(),
        ))),
    }
}

fn looks_like_path(s: &str) -> bool {
    s.ends_with(".json") || Path::new(s).is_file()
}

pub fn cmd_crossratio(args: &[String], backend: Backend) -> Result<Outcome> {
    if args.len() != 4 {
        return Err(Error::Parse(format!("crossratio takes 4 arguments, got {}", args.len())));
    }
    if args.iter().all(|a| looks_like_path(a)) {
        let pts: Vec<SubspacePoint> = args.iter().map(|a| load_point(Path::new(a))).collect::<Result<_>>()?;
        let k = operator_cr(&pts[0], &pts[1], &pts[2], &pts[3])?;
        let (t, d) = (k.trace(), k.det());
        let json = json!({ "schema": SCHEMA, "trace": complex_json(t), "det": complex_json(d), "n": pts[0].dim() });
        let text = format!("trace: {}\ndet: {}\n", fmt_complex(t), fmt_complex(d));
        return Ok(Outcome::ok(json, text));
    }
    match backend {
        Backend::Float => {
            let v: Vec<RP1Value> = args.iter().map(|a| parse_extended(a)).collect::<Result<_>>()?;
            let r = classical_cr(v[0], v[1], v[2], v[3])?;
            Ok(Outcome::ok(json!({ "schema": SCHEMA, "value": extended_to_json(r) }), format!("{r}\n")))
        }
        Backend::Exact => {
            let v: Vec<ExactValue> = args.iter().map(|a| exact_extended(a)).collect::<Result<_>>()?;
            let r = exact::classical_cr(&v[0], &v[1], &v[2], &v[3])?;
            let s = r.to_string();
            Ok(Outcome::ok(json!({ "schema": SCHEMA, "value": s }), format!("{s}\n")))
        }
    }
}

pub fn cmd_check(config: &SweepConfig) -> Result<SweepReport> {
    run_sweep(config)
}

fn parse_all(values: &[String]) -> Result<Vec<RP1Value>> {
    values.iter().map(|v| parse_extended(v)).collect()
}

fn value_outcome(v: RP1Value) -> Outcome {
    Outcome::ok(json!({ "schema": SCHEMA, "value": extended_to_json(v) }), format!("{v}\n"))
}

pub fn cmd_classical(op: &ClassicalOp) -> Result<Outcome> {
    match op {
        ClassicalOp::Cr { values } => {
            let v = parse_all(values)?;
            Ok(value_outcome(classical_cr(v[0], v[1], v[2], v[3])?))
        }
        ClassicalOp::Ratio { values } => {
            let v = parse_all(values)?;
            Ok(value_outcome(ratio(v[0], v[1], v[2])?))
        }
        ClassicalOp::Cyclic { values } => {
            let v = parse_all(values)?;
            let b = cyclic_order(v[0], v[1], v[2])?;
            Ok(Outcome::ok(json!({ "schema": SCHEMA, "cyclic": b }), format!("{b}\n")))
        }
        ClassicalOp::Pairing { measure, f, g } => {
            let mu = load_measure(measure)?;
            let v = pairing(&mu, &load_classical_fn(f)?, &load_classical_fn(g)?)?;
            Ok(value_outcome(v))
        }
        ClassicalOp::Obstate { f, f1, f0, finf } => {
            let (f, f1, f0, finf) = (
                load_classical_fn(f)?,
                load_classical_fn(f1)?,
                load_classical_fn(f0)?,
                load_classical_fn(finf)?,
            );
            let values: Vec<RP1Value> = (0..f.base_size())
                .map(|p| fn_obstate_value(&f, &f1, &f0, &finf, p))
                .collect::<Result<_>>()?;
            let text = values.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
            Ok(Outcome::ok(
                json!({ "schema": SCHEMA, "m": values.len(), "values": values.iter().map(|v| extended_to_json(*v)).collect::<Vec<_>>() }),
                format!("{text}\n"),
            ))
        }
    }
}

pub fn cmd_membership(path: &Path, space: Option<Space>) -> Result<Outcome> {
    let x = load_point(path)?;
    let spaces = match space {
        Some(s) => vec![s],
        None => vec![Space::R, Space::Rprime, Space::Rns],
    };
    let mut report = serde_json::Map::new();
    report.insert("schema".into(), json!(SCHEMA));
    let mut text = String::new();
    for s in spaces {
        let m = membership(&x, s);
        report.insert(s.to_string(), json!(m));
        text.push_str(&format!("{s}: {m}\n"));
    }
    let lag = is_lagrangian(&x);
    report.insert("lagrangian".into(), json!(lag));
    text.push_str(&format!("lagrangian: {lag}\n"));
    Ok(Outcome::ok(Value::Object(report), text))
}

fn elem_outcome(u: &AlgElem) -> Outcome {
    Outcome::ok(
        json!({ "schema": SCHEMA, "matrix": MatrixJson::from_elem(u) }),
        format!("{}\n", matrix_text(u.matrix())),
    )
}

fn point_outcome(p: &SubspacePoint, extra: Option<&AlgElem>) -> Outcome {
    let mut json = json!({ "schema": SCHEMA, "point": PointJson::from_point(p) });
    let mut text = format!("basis:\n{}\n", matrix_text(p.basis()));
    if let Some(u) = extra {
        json["unitary"] = serde_json::to_value(MatrixJson::from_elem(u)).unwrap_or(Value::Null);
        text.push_str(&format!("unitary:\n{}\n", matrix_text(u.matrix())));
    }
    Outcome::ok(json, text)
}

pub fn cmd_cayley(path: &Path, inverse: bool) -> Result<Outcome> {
    if inverse {
        let u = load_matrix(path)?;
        Ok(point_outcome(&unitary_to_point(&u)?, None))
    } else {
        Ok(elem_outcome(&cayley_to_unitary(&load_point(path)?)?))
    }
}

pub fn cmd_torsor(x: &Path, y: &Path, z: &Path) -> Result<Outcome> {
    let p = unitary_torsor(&load_point(x)?, &load_point(y)?, &load_point(z)?)?;
    let u = cayley_to_unitary(&p)?;
    Ok(point_outcome(&p, Some(&u)))
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Expect { path } => cmd_expect(path),
        Command::Crossratio { args, backend } => cmd_crossratio(args, *backend),
        Command::Check(args) => {
            let report = cmd_check(&SweepConfig::from(args))?;
            Ok(Outcome {
                json: serde_json::to_value(&report).unwrap_or(Value::Null),
                text: report.to_text(),
                success: report.ok,
            })
        }
        Command::Classical { op } => cmd_classical(op),
        Command::Membership { path, space } => cmd_membership(path, *space),
        Command::Cayley { path, inverse } => cmd_cayley(path, *inverse),
        Command::Torsor { x, y, z } => cmd_torsor(x, y, z),
    }
}

/// Parses `args`, runs the command and prints the result; the process exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            if cli.format.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serialisable"));
            } else {
                print!("{}", out.text);
            }
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
