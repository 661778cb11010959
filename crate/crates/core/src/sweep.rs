//! Seeded property sweep over every invariant of the crate.
//!
//! Each property is a trial function drawing its inputs from a [`Ctx`]. A trial
//! returns a residual; it passes when the residual is at most the property
//! tolerance (boolean properties return `0` or `1`). Trial `t` of property `id`
//! at dimension `n` is seeded by `sub_seed(seed, "id/n", t)`, so any failure can
//! be replayed on its own, and trials may run in any order.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::algebra::{
    homotope_jordan, pair_triple, pair_triple_minus, random_density, random_elem, random_hermitian,
    random_invertible, random_psd, random_unit_vector, random_unitary, singular_values, AlgElem, CMatrix,
};
use crate::classical::{
    classical_cr, cyclic_order, density_pushforward, fn_obstate_value, pairing, pairing_invariance_check,
    real_like, separates, Bijection, ClassicalFn, Extended, Measure, RP1Value,
};
use crate::crossratio::{kernel, scalar_cr_det, scalar_cr_trace};
use crate::error::{Error, Result};
use crate::exact::{self, ExactMatrix, ExactPoint, ExactValue};
use crate::grassmann::{
    apply_map, is_transversal, point_from_chart, projector, random_map, random_point, scalar_action,
    torsor_product, Chart, ProjectiveMap, SubspacePoint,
};
use crate::hermitian::{
    alpha, arithmetic_distance_in, beta, cayley_to_unitary, cyclic_triple, intrinsic_line_point_in, membership,
    poles, preserves_form, random_form_automorphism, random_unitary_symmetry, random_universe_point, s1_action,
    tangent_product, tangent_unit, tau, unitary_to_point, unitary_torsor, Space,
};
use crate::io::{extended_to_json, MatrixJson, PointJson};
use crate::obstate::{
    distribution, expectation, is_cyclically_ordered, is_positive, is_pure, new_obstate, pure_expectation,
    variance, Obstate,
};
use crate::random::{complex_gaussian, gaussian, index, rng_from_seed, sub_seed, uniform, Rng};

pub const SCHEMA: u32 = 1;
pub const DEFAULT_DIMS: [usize; 5] = [1, 2, 3, 4, 6];
pub const DEFAULT_TRIALS: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Float,
    Exact,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Float => "float",
            Self::Exact => "exact",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n_list: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub tol: Option<f64>,
    pub properties: Vec<String>,
    pub backend: Backend,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_list: DEFAULT_DIMS.to_vec(),
            trials: DEFAULT_TRIALS,
            seed: 0,
            tol: None,
            properties: Vec::new(),
            backend: Backend::Float,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() || self.n_list.contains(&0) {
            return Err(Error::Parse("--n values must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Parse("--trials must be at least 1".into()));
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::Parse(format!("--tol must be a nonnegative number, got {t}")));
            }
        }
        for f in &self.properties {
            if !registry().iter().any(|p| matches_filter(p.id, f)) {
                return Err(Error::Parse(format!("unknown property '{f}'")));
            }
        }
        Ok(())
    }
}

/// Serialisable snapshot of trial inputs.
pub trait Record {
    fn record(&self) -> Value;
}

impl Record for AlgElem {
    fn record(&self) -> Value {
        serde_json::to_value(MatrixJson::from_elem(self)).unwrap_or(Value::Null)
    }
}

impl Record for SubspacePoint {
    fn record(&self) -> Value {
        serde_json::to_value(PointJson::from_point(self)).unwrap_or(Value::Null)
    }
}

impl Record for CMatrix {
    fn record(&self) -> Value {
        let re: Vec<Vec<f64>> = (0..self.nrows()).map(|r| (0..self.ncols()).map(|c| self[(r, c)].re).collect()).collect();
        let im: Vec<Vec<f64>> = (0..self.nrows()).map(|r| (0..self.ncols()).map(|c| self[(r, c)].im).collect()).collect();
        json!({ "re": re, "im": im })
    }
}

impl Record for ProjectiveMap {
    fn record(&self) -> Value {
        self.rep().record()
    }
}

impl Record for Obstate {
    fn record(&self) -> Value {
        json!({
            "A": self.observable().record(),
            "W": self.state().record(),
            "A0": self.ref_observable().record(),
            "Winf": self.ref_state().record(),
            "strong": self.is_strong(),
        })
    }
}

impl Record for f64 {
    fn record(&self) -> Value {
        json!(self)
    }
}

impl Record for Complex64 {
    fn record(&self) -> Value {
        json!([self.re, self.im])
    }
}

impl Record for RP1Value {
    fn record(&self) -> Value {
        extended_to_json(*self)
    }
}

impl Record for Extended<Complex64> {
    fn record(&self) -> Value {
        match self {
            Extended::Finite(z) => z.record(),
            Extended::Infinity => json!("inf"),
        }
    }
}

impl<T: Record> Record for [T] {
    fn record(&self) -> Value {
        Value::Array(self.iter().map(Record::record).collect())
    }
}

impl<T: Record> Record for Vec<T> {
    fn record(&self) -> Value {
        self.as_slice().record()
    }
}

impl Record for ClassicalFn {
    fn record(&self) -> Value {
        self.values.record()
    }
}

impl Record for Measure {
    fn record(&self) -> Value {
        json!(self.weights())
    }
}

impl Record for Bijection {
    fn record(&self) -> Value {
        json!(self.as_slice())
    }
}

impl Record for ExactMatrix {
    fn record(&self) -> Value {
        json!(format!("{self:?}"))
    }
}

impl Record for ExactPoint {
    fn record(&self) -> Value {
        self.basis().record()
    }
}

impl Record for ExactValue {
    fn record(&self) -> Value {
        match self {
            ExactValue::Finite(z) => json!(format!("{} + {}i", z.re, z.im)),
            ExactValue::Infinity => json!("inf"),
        }
    }
}

/// Inputs and randomness of one trial.
pub struct Ctx {
    pub rng: Rng,
    pub n: usize,
    inputs: Option<Map<String, Value>>,
}

impl Ctx {
    pub fn new(seed: u64, n: usize, capture: bool) -> Self {
        Self {
            rng: rng_from_seed(seed),
            n,
            inputs: capture.then(Map::new),
        }
    }

    pub fn record<T: Record + ?Sized>(&mut self, name: &str, value: &T) {
        if let Some(map) = &mut self.inputs {
            map.insert(name.to_string(), value.record());
        }
    }

    fn take_inputs(&mut self) -> Value {
        Value::Object(self.inputs.take().unwrap_or_default())
    }
}

pub type TrialFn = fn(&mut Ctx) -> Result<f64>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Check {
    /// Pass iff the residual is at most the tolerance.
    Residual(f64),
    /// Pass iff the trial returns `0`.
    Boolean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dims {
    /// Runs at every requested `n`.
    All,
    /// Runs once at the given `n`, whatever the requested list.
    Only(usize),
    /// Does not depend on `n`; runs once.
    Independent,
}

pub struct Property {
    pub id: &'static str,
    pub summary: &'static str,
    pub check: Check,
    pub dims: Dims,
    pub float: TrialFn,
    pub exact: Option<TrialFn>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: u64,
    pub sub_seed: u64,
    pub residual: Option<f64>,
    pub error: Option<String>,
    pub inputs: Value,
    pub reproducer: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub id: String,
    pub n: Option<usize>,
    pub status: Status,
    pub tolerance: Option<f64>,
    pub pass_count: u64,
    pub fail_count: u64,
    pub worst_residual: f64,
    pub example_failure: Option<Failure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema: u32,
    pub backend: Backend,
    pub seed: u64,
    pub trials: u64,
    pub n_list: Vec<usize>,
    pub tolerance_override: Option<f64>,
    pub properties: Vec<PropertyReport>,
    pub summary: Summary,
    pub ok: bool,
}

impl SweepReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serialisable")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "schema {}  backend {}  seed {}  trials {}  n {:?}",
            self.schema, self.backend, self.seed, self.trials, self.n_list
        );
        for p in &self.properties {
            let n = p.n.map_or_else(|| "-".to_string(), |n| n.to_string());
            let tag = match p.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            let _ = write!(
                out,
                "{tag}  {:<40} n={n:<2} {}/{}  worst {:.3e}",
                p.id,
                p.pass_count,
                p.pass_count + p.fail_count,
                p.worst_residual
            );
            if let Some(f) = &p.example_failure {
                let _ = write!(out, "  first failure: trial {} sub-seed {}", f.trial, f.sub_seed);
                if let Some(e) = &f.error {
                    let _ = write!(out, " ({e})");
                }
                let _ = write!(out, "\n      reproduce: {}", f.reproducer);
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{}: {} passed, {} failed, {} skipped",
            if self.ok { "OK" } else { "FAILED" },
            self.summary.passed,
            self.summary.failed,
            self.summary.skipped
        );
        out
    }
}

fn matches_filter(id: &str, filter: &str) -> bool {
    let f = filter.trim_end_matches('.');
    id == f || id.strip_prefix(f).is_some_and(|rest| rest.starts_with('.'))
}

fn stream_key(id: &str, n: usize) -> String {
    format!("{id}/n={n}")
}

/// Runs one trial of `p` at dimension `n` with the given sub-seed.
pub fn run_trial(p: &Property, backend: Backend, n: usize, seed: u64, capture: bool) -> (Result<f64>, Value) {
    let f = match backend {
        Backend::Float => p.float,
        Backend::Exact => match p.exact {
            Some(f) => f,
            None => return (Err(Error::Parse(format!("{} has no exact variant", p.id))), Value::Null),
        },
    };
    let mut ctx = Ctx::new(seed, n, capture);
    let r = f(&mut ctx);
    (r, ctx.take_inputs())
}

fn dims_for(p: &Property, n_list: &[usize]) -> Vec<Option<usize>> {
    match p.dims {
        Dims::All => n_list.iter().map(|&n| Some(n)).collect(),
        Dims::Only(n) => vec![Some(n)],
        Dims::Independent => vec![None],
    }
}

fn run_property(p: &Property, n: Option<usize>, cfg: &SweepConfig) -> PropertyReport {
    let tolerance = match p.check {
        Check::Residual(t) => Some(cfg.tol.unwrap_or(t)),
        Check::Boolean => None,
    };
    let mut report = PropertyReport {
        id: p.id.to_string(),
        n,
        status: Status::Pass,
        tolerance,
        pass_count: 0,
        fail_count: 0,
        worst_residual: 0.0,
        example_failure: None,
    };
    if cfg.backend == Backend::Exact && p.exact.is_none() {
        report.status = Status::Skipped;
        return report;
    }
    let dim = n.unwrap_or(1);
    let key = stream_key(p.id, dim);
    let outcomes: Vec<Result<f64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(p, cfg.backend, dim, sub_seed(cfg.seed, &key, t), false).0)
        .collect();
    for (t, outcome) in outcomes.into_iter().enumerate() {
        let (passed, residual, error) = match outcome {
            Ok(r) => {
                let ok = match tolerance {
                    Some(tol) => r <= tol,
                    None => r == 0.0,
                };
                (ok, Some(r), None)
            }
            Err(e) => (false, None, Some(e.to_string())),
        };
        if let Some(r) = residual.filter(|r| r.is_finite()) {
            report.worst_residual = report.worst_residual.max(r);
        }
        if passed {
            report.pass_count += 1;
            continue;
        }
        report.fail_count += 1;
        if report.example_failure.is_none() {
            let trial = t as u64;
            let seed = sub_seed(cfg.seed, &key, trial);
            let (_, inputs) = run_trial(p, cfg.backend, dim, seed, true);
            let backend = cfg.backend;
            report.example_failure = Some(Failure {
                trial,
                sub_seed: seed,
                residual: residual.filter(|r| r.is_finite()),
                error,
                inputs,
                reproducer: format!(
                    "matryoshka check --property {} --n {dim} --seed {} --trials {} --backend {backend}",
                    p.id,
                    cfg.seed,
                    trial + 1
                ),
            });
        }
    }
    if report.fail_count > 0 {
        report.status = Status::Fail;
    }
    report
}

/// Runs every selected property and folds the results in registry order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let mut n_list = cfg.n_list.clone();
    n_list.sort_unstable();
    n_list.dedup();
    let jobs: Vec<(&Property, Option<usize>)> = registry()
        .iter()
        .filter(|p| cfg.properties.is_empty() || cfg.properties.iter().any(|f| matches_filter(p.id, f)))
        .flat_map(|p| dims_for(p, &n_list).into_iter().map(move |n| (p, n)))
        .collect();
    let properties: Vec<PropertyReport> = jobs.par_iter().map(|(p, n)| run_property(p, *n, cfg)).collect();
    let count = |s: Status| properties.iter().filter(|p| p.status == s).count();
    let summary = Summary {
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        skipped: count(Status::Skipped),
    };
    Ok(SweepReport {
        schema: SCHEMA,
        backend: cfg.backend,
        seed: cfg.seed,
        trials: cfg.trials,
        n_list,
        tolerance_override: cfg.tol,
        ok: summary.failed == 0,
        summary,
        properties,
    })
}

pub fn find_property(id: &str) -> Option<&'static Property> {
    registry().iter().find(|p| p.id == id)
}

fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

fn rel(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

fn crel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

fn elem_rel(a: &AlgElem, b: &AlgElem) -> f64 {
    rel(a.matrix(), b.matrix())
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn random_points(ctx: &mut Ctx, count: usize) -> Result<Vec<SubspacePoint>> {
    let n = ctx.n;
    (0..count).map(|_| random_point(&mut ctx.rng, n)).collect()
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

// algebra

fn algebra_involution(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let (a, b) = (random_elem(&mut ctx.rng, n), random_elem(&mut ctx.rng, n));
    let l = complex_gaussian(&mut ctx.rng);
    ctx.record("a", &a);
    ctx.record("b", &b);
    ctx.record("lambda", &l);
    Ok(max_of([
        elem_rel(&a.adjoint().adjoint(), &a),
        elem_rel(&a.mul(&b)?.adjoint(), &b.adjoint().mul(&a.adjoint())?),
        elem_rel(&a.scale(l).adjoint(), &a.adjoint().scale(l.conj())),
        elem_rel(&(&a + &b).adjoint(), &(&a.adjoint() + &b.adjoint())),
    ]))
}

fn algebra_involution_exact(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let a = ExactMatrix::random_integer(&mut ctx.rng, n, n, 9);
    let b = ExactMatrix::random_integer(&mut ctx.rng, n, n, 9);
    let l = exact::gq(index(&mut ctx.rng, 19) as i64 - 9, index(&mut ctx.rng, 19) as i64 - 9);
    ctx.record("a", &a);
    ctx.record("b", &b);
    let lc = num_complex::Complex::new(l.re.clone(), -l.im.clone());
    Ok(flag(
        a.adjoint().adjoint() == a
            && a.mul(&b)?.adjoint() == b.adjoint().mul(&a.adjoint())?
            && a.scale(&l).adjoint() == a.adjoint().scale(&lc)
            && a.add(&b)?.adjoint() == a.adjoint().add(&b.adjoint())?,
    ))
}

fn algebra_jordan_identity(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let u = random_hermitian(&mut ctx.rng, n);
    let a = random_hermitian(&mut ctx.rng, n);
    let b = random_hermitian(&mut ctx.rng, n);
    ctx.record("u", &u);
    ctx.record("a", &a);
    ctx.record("b", &b);
    let j = |x: &AlgElem, y: &AlgElem| homotope_jordan(x, &u, y);
    let a2 = j(&a, &a)?;
    let lhs = j(&a, &j(&b, &a2)?)?;
    let rhs = j(&j(&a, &b)?, &a2)?;
    Ok((lhs.matrix() - rhs.matrix()).norm() / (1.0 + lhs.norm() + rhs.norm()))
}

fn algebra_jordan_identity_exact(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let u = ExactMatrix::random_hermitian(&mut ctx.rng, n, 5);
    let a = ExactMatrix::random_hermitian(&mut ctx.rng, n, 5);
    let b = ExactMatrix::random_hermitian(&mut ctx.rng, n, 5);
    ctx.record("u", &u);
    ctx.record("a", &a);
    ctx.record("b", &b);
    let j = |x: &ExactMatrix, y: &ExactMatrix| exact::homotope_jordan(x, &u, y);
    let a2 = j(&a, &a)?;
    Ok(flag(j(&a, &j(&b, &a2)?)? == j(&j(&a, &b)?, &a2)?))
}

fn algebra_pair_identity(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let e: Vec<AlgElem> = (0..5).map(|_| random_elem(&mut ctx.rng, n)).collect();
    ctx.record("elements", &e);
    let (x, y, z, u, v) = (&e[0], &e[1], &e[2], &e[3], &e[4]);
    let left = pair_triple(x, y, &pair_triple(z, u, v)?)?;
    let outer = pair_triple(&pair_triple(x, y, z)?, u, v)?;
    let middle = pair_triple(x, &pair_triple_minus(u, z, y)?, v)?;
    let left_m = pair_triple_minus(x, y, &pair_triple_minus(z, u, v)?)?;
    let outer_m = pair_triple_minus(&pair_triple_minus(x, y, z)?, u, v)?;
    let middle_m = pair_triple_minus(x, &pair_triple(u, z, y)?, v)?;
    let scale = 1.0 + left.norm();
    Ok(max_of([
        (left.matrix() - outer.matrix()).norm() / scale,
        (left.matrix() - middle.matrix()).norm() / scale,
        (left_m.matrix() - outer_m.matrix()).norm() / (1.0 + left_m.norm()),
        (left_m.matrix() - middle_m.matrix()).norm() / (1.0 + left_m.norm()),
    ]))
}

fn algebra_pair_identity_exact(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let e: Vec<ExactMatrix> = (0..5).map(|_| ExactMatrix::random_integer(&mut ctx.rng, n, n, 4)).collect();
    ctx.record("elements", &e);
    let (x, y, z, u, v) = (&e[0], &e[1], &e[2], &e[3], &e[4]);
    let left = exact::pair_triple(x, y, &exact::pair_triple(z, u, v)?)?;
    let outer = exact::pair_triple(&exact::pair_triple(x, y, z)?, u, v)?;
    let middle = exact::pair_triple(x, &exact::pair_triple_minus(u, z, y)?, v)?;
    Ok(flag(left == outer && left == middle))
}

fn algebra_pstar_positivity(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let a = random_elem(&mut ctx.rng, n);
    let b = random_psd(&mut ctx.rng, n);
    ctx.record("a", &a);
    ctx.record("b", &b);
    Ok(flag(a.mul(&b)?.mul(&a.adjoint())?.is_psd()))
}

fn algebra_pstar_invertibility(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let a = random_elem(&mut ctx.rng, n);
    let b = random_invertible(&mut ctx.rng, n);
    ctx.record("a", &a);
    ctx.record("b", &b);
    let s = &a.adjoint().mul(&a)? + &b.adjoint().mul(&b)?;
    Ok(flag(s.is_invertible()))
}

fn algebra_trace_conjugation(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let a = random_elem(&mut ctx.rng, n);
    let g = random_invertible(&mut ctx.rng, n);
    ctx.record("a", &a);
    ctx.record("g", &g);
    let conj = g.mul(&a)?.mul(&g.inverse()?)?;
    Ok(crel(conj.trace_normalized(), a.trace_normalized()))
}

// grassmann

fn grassmann_affine_chart(ctx: &mut Ctx) -> Result<f64> {
    let p = random_points(ctx, 5)?;
    let r = gaussian(&mut ctx.rng);
    ctx.record("points", &p);
    ctx.record("r", &r);
    let (a, o, x, y, z) = (&p[0], &p[1], &p[2], &p[3], &p[4]);
    let chart = Chart::new(a, o)?;
    let (cx, cy, cz) = (chart.coords(x)?, chart.coords(y)?, chart.coords(z)?);
    let sum = chart.coords(&torsor_product(y, x, z, a, a)?)?;
    let scaled = chart.coords(&scalar_action(c(r), a, x, y)?)?;
    let round_trip = chart.point(&cy);
    Ok(max_of([
        rel(&sum, &(&cy + &cz - &cx)),
        rel(&scaled, &(&cx + (&cy - &cx) * c(r))),
        round_trip.distance(y),
    ]))
}

fn group_residual(x: &SubspacePoint, y: &SubspacePoint, z: &SubspacePoint, w: &SubspacePoint, a: &SubspacePoint, b: &SubspacePoint) -> Result<f64> {
    let m = |p: &SubspacePoint, q: &SubspacePoint| torsor_product(p, y, q, a, b);
    let assoc = m(&m(x, z)?, w)?.distance(&m(x, &m(z, w)?)?);
    let unit = m(x, y)?.distance(x).max(m(y, x)?.distance(x));
    let inv = torsor_product(y, x, y, a, b)?;
    let inverse = m(x, &inv)?.distance(y).max(m(&inv, x)?.distance(y));
    Ok(max_of([assoc, unit, inverse]))
}

fn grassmann_group_additive(ctx: &mut Ctx) -> Result<f64> {
    let p = random_points(ctx, 5)?;
    ctx.record("points", &p);
    group_residual(&p[0], &p[1], &p[2], &p[3], &p[4], &p[4])
}

fn grassmann_group_transversal(ctx: &mut Ctx) -> Result<f64> {
    let p = random_points(ctx, 6)?;
    ctx.record("points", &p);
    group_residual(&p[0], &p[1], &p[2], &p[3], &p[4], &p[5])
}

fn exact_points(ctx: &mut Ctx, count: usize) -> Result<Vec<ExactPoint>> {
    let n = ctx.n;
    (0..count)
        .map(|_| ExactPoint::from_chart(&ExactMatrix::random_integer(&mut ctx.rng, n, n, 1)))
        .collect()
}

fn exact_group(ctx: &mut Ctx, same_horizon: bool) -> Result<f64> {
    let p = exact_points(ctx, 6)?;
    ctx.record("points", &p);
    let (x, y, z, w, a) = (&p[0], &p[1], &p[2], &p[3], &p[4]);
    let b = if same_horizon { &p[4] } else { &p[5] };
    for q in [x, y, z, w] {
        if !q.is_transversal(a) || !q.is_transversal(b) {
            return Ok(0.0);
        }
    }
    let m = |p: &ExactPoint, q: &ExactPoint| exact::torsor_product(p, y, q, a, b);
    let assoc = m(&m(x, z)?, w)? == m(x, &m(z, w)?)?;
    let unit = m(x, y)? == *x && m(y, x)? == *x;
    let inv = exact::torsor_product(y, x, y, a, b)?;
    let inverse = m(x, &inv)? == *y;
    Ok(flag(assoc && unit && inverse))
}

fn grassmann_group_additive_exact(ctx: &mut Ctx) -> Result<f64> {
    exact_group(ctx, true)
}

fn grassmann_group_transversal_exact(ctx: &mut Ctx) -> Result<f64> {
    exact_group(ctx, false)
}

fn grassmann_basis_invariance(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let x = random_point(&mut ctx.rng, n)?;
    let g = random_invertible(&mut ctx.rng, n);
    ctx.record("x", &x);
    ctx.record("g", &g);
    Ok(SubspacePoint::new(x.basis() * g.matrix())?.distance(&x))
}

fn grassmann_transversality_equivariance(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let x = random_point(&mut ctx.rng, n)?;
    let shared = index(&mut ctx.rng, 2) == 1;
    let mut basis = crate::random::complex_gaussian_matrix(&mut ctx.rng, 2 * n, n);
    if shared {
        basis.set_column(0, &x.basis().column(0));
    }
    let a = SubspacePoint::new(basis)?;
    let g = random_map(&mut ctx.rng, n)?;
    ctx.record("x", &x);
    ctx.record("a", &a);
    ctx.record("g", &g);
    let before = is_transversal(&x, &a);
    let after = is_transversal(&apply_map(&g, &x), &apply_map(&g, &a));
    Ok(flag(before == after && before != shared))
}

fn grassmann_projector(ctx: &mut Ctx) -> Result<f64> {
    let p = random_points(ctx, 2)?;
    ctx.record("points", &p);
    let (x, a) = (&p[0], &p[1]);
    let pr = projector(x, a)?.matrix;
    let scale = 1.0 + pr.norm();
    Ok(max_of([
        (&pr * &pr - &pr).norm() / (scale * scale),
        (&pr * x.basis() - x.basis()).norm() / scale,
        (&pr * a.basis()).norm() / scale,
    ]))
}

fn grassmann_action(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let x = random_point(&mut ctx.rng, n)?;
    let g = random_map(&mut ctx.rng, n)?;
    let h = random_map(&mut ctx.rng, n)?;
    ctx.record("x", &x);
    ctx.record("g", &g);
    ctx.record("h", &h);
    let composed = apply_map(&g.compose(&h), &x);
    let stepwise = apply_map(&g, &apply_map(&h, &x));
    let identity = apply_map(&ProjectiveMap::identity(n), &x);
    Ok(composed.distance(&stepwise).max(identity.distance(&x)))
}

// crossratio

fn scalar_point(z: Extended<Complex64>) -> SubspacePoint {
    match z {
        Extended::Finite(v) => point_from_chart(&AlgElem::from_diagonal(&[v])),
        Extended::Infinity => SubspacePoint::infinity(1),
    }
}

fn crossratio_n1_reduction(ctx: &mut Ctx) -> Result<f64> {
    let vals: Vec<Extended<Complex64>> = (0..4).map(|_| Extended::Finite(complex_gaussian(&mut ctx.rng) * 2.0)).collect();
    ctx.record("values", &vals);
    let pts: Vec<_> = vals.iter().map(|&z| scalar_point(z)).collect();
    let expected = classical_cr(vals[0], vals[1], vals[2], vals[3])?
        .finite()
        .ok_or_else(|| Error::Degenerate("infinite cross-ratio".into()))?;
    let t = scalar_cr_trace(&pts[0], &pts[1], &pts[2], &pts[3])?;
    let d = scalar_cr_det(&pts[0], &pts[1], &pts[2], &pts[3])?;
    Ok(crel(t, expected).max(crel(d, expected)))
}

fn crossratio_basis_independence(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let p = random_points(ctx, 4)?;
    let g = random_invertible(&mut ctx.rng, n);
    let h = random_invertible(&mut ctx.rng, n);
    ctx.record("points", &p);
    ctx.record("g", &g);
    ctx.record("h", &h);
    let k1 = kernel(&p[0], &p[1], &p[2], &p[3])?;
    let x2 = SubspacePoint::new(p[0].basis() * g.matrix())?;
    let a2 = SubspacePoint::new(p[1].basis() * h.matrix())?;
    let k2 = kernel(&x2, &a2, &p[2], &p[3])?;
    Ok(crel(k2.trace(), k1.trace()).max(crel(k2.det(), k1.det())))
}

fn crossratio_naturality(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let p = random_points(ctx, 4)?;
    let g = random_map(&mut ctx.rng, n)?;
    ctx.record("points", &p);
    ctx.record("g", &g);
    let (x, a, b, y) = (&p[0], &p[1], &p[2], &p[3]);
    let k = kernel(x, a, b, y)?;
    let gp: Vec<_> = p.iter().map(|q| apply_map(&g, q)).collect();
    let kg = kernel(&gp[0], &gp[1], &gp[2], &gp[3])?;
    let lhs = kg.extend_by_zero(&gp[1])?.matrix;
    let rhs = g.rep() * k.extend_by_zero(a)?.matrix * g.inverse().rep();
    Ok(crel(kg.trace(), k.trace()).max(rel(&lhs, &rhs)))
}

fn random_real(rng: &mut Rng) -> f64 {
    gaussian(rng) * 3.0
}

fn crossratio_chain(ctx: &mut Ctx) -> Result<f64> {
    let (a, b, cc) = (random_real(&mut ctx.rng), random_real(&mut ctx.rng), random_real(&mut ctx.rng));
    ctx.record("abc", &vec![a, b, cc]);
    let f = Extended::Finite;
    let inf = Extended::Infinity;
    let fin = |v: RP1Value| v.finite().ok_or_else(|| Error::Degenerate("unexpected infinity".into()));
    let r1 = fin(classical_cr(f(a), f(1.0), f(0.0), inf)?)?;
    let r2 = fin(classical_cr(f(a), f(b), f(cc), inf)?)?;
    let r3 = fin(classical_cr(f(a), f(b), f(0.0), inf)?)?;
    let ratio = fin(crate::classical::ratio(f(a), f(b), f(cc))?)?;
    let close = |x: f64, y: f64| (x - y).abs() / y.abs().max(1.0);
    Ok(max_of([close(r1, a), close(r2, ratio), close(r2, (a - cc) / (b - cc)), close(r3, a / b)]))
}

fn crossratio_chain_exact(ctx: &mut Ctx) -> Result<f64> {
    let q = |rng: &mut Rng| ExactValue::Finite(num_complex::Complex::new(exact::random_rational(rng, 50), exact::random_rational(rng, 50)));
    let (a, b, cc) = (q(&mut ctx.rng), q(&mut ctx.rng), q(&mut ctx.rng));
    ctx.record("abc", &[a.clone(), b.clone(), cc.clone()][..]);
    let one = ExactValue::Finite(exact::gq(1, 0));
    let zero = ExactValue::Finite(exact::gq(0, 0));
    let inf = ExactValue::Infinity;
    let (ExactValue::Finite(av), ExactValue::Finite(bv), ExactValue::Finite(cv)) = (&a, &b, &cc) else {
        unreachable!()
    };
    if bv == cv || num_traits::Zero::is_zero(bv) {
        return Ok(0.0);
    }
    let expected = ExactValue::Finite((av - cv) / (bv - cv));
    let quotient = ExactValue::Finite(av / bv);
    Ok(flag(
        exact::classical_cr(&a, &one, &zero, &inf)? == a
            && exact::classical_cr(&a, &b, &cc, &inf)? == expected
            && exact::ratio(&a, &b, &cc)? == expected
            && exact::classical_cr(&a, &b, &zero, &inf)? == quotient,
    ))
}

fn random_extended(rng: &mut Rng) -> RP1Value {
    if index(rng, 8) == 0 {
        Extended::Infinity
    } else {
        Extended::Finite(random_real(rng))
    }
}

fn crossratio_separation(ctx: &mut Ctx) -> Result<f64> {
    let v: Vec<RP1Value> = (0..4).map(|_| random_extended(&mut ctx.rng)).collect();
    ctx.record("values", &v);
    if (0..4).any(|i| (i + 1..4).any(|j| v[i] == v[j])) {
        return Ok(0.0);
    }
    let negative = match classical_cr(v[0], v[1], v[2], v[3])? {
        Extended::Finite(x) => x < 0.0,
        Extended::Infinity => false,
    };
    Ok(flag(negative == separates(v[0], v[1], v[2], v[3])?))
}

// hermitian

fn hermitian_klein_four(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let x = random_point(&mut ctx.rng, n)?;
    ctx.record("x", &x);
    Ok(max_of([
        tau(&tau(&x)).distance(&x),
        alpha(&alpha(&x)).distance(&x),
        beta(&beta(&x)).distance(&x),
        beta(&tau(&x)).distance(&alpha(&x)),
        tau(&beta(&x)).distance(&alpha(&x)),
        alpha(&tau(&x)).distance(&beta(&x)),
        tau(&alpha(&x)).distance(&beta(&x)),
    ]))
}

fn hermitian_aut_omega(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let g = random_form_automorphism(&mut ctx.rng, n, 0.5);
    let x = point_from_chart(&random_hermitian(&mut ctx.rng, n));
    ctx.record("g", &g);
    ctx.record("x", &x);
    Ok(flag(preserves_form(&g) && membership(&apply_map(&g, &x), Space::R)))
}

fn hermitian_affine_part(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let a = random_universe_point(&mut ctx.rng, n);
    let g = random_form_automorphism(&mut ctx.rng, n, 0.5);
    let x = apply_map(&g, &point_from_chart(&random_hermitian(&mut ctx.rng, n)));
    ctx.record("a", &a);
    ctx.record("x", &x);
    if !membership(&x, Space::R) {
        return Ok(1.0);
    }
    Ok(flag(!is_transversal(&x, &a) || membership(&x, Space::Rns)))
}

fn hermitian_universe(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let u = random_unitary_symmetry(&mut ctx.rng, n);
    let g = random_form_automorphism(&mut ctx.rng, n, 0.5);
    let x = point_from_chart(&random_hermitian(&mut ctx.rng, n));
    let y = apply_map(&g, &apply_map(&u, &x));
    ctx.record("x", &x);
    ctx.record("y", &y);
    Ok(flag(membership(&y, Space::R) && membership(&y, Space::Rns)))
}

fn hermitian_u_equivariance(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let f = random_unitary_symmetry(&mut ctx.rng, n);
    let x = random_universe_point(&mut ctx.rng, n);
    let theta = uniform(&mut ctx.rng, -3.2, 3.2);
    ctx.record("f", &f);
    ctx.record("x", &x);
    ctx.record("theta", &theta);
    let fx = apply_map(&f, &x);
    if !membership(&fx, Space::Rns) {
        return Ok(1.0);
    }
    Ok(apply_map(&f, &s1_action(theta, &x)).distance(&s1_action(theta, &fx)))
}

fn hermitian_cayley_round_trip(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let x = random_universe_point(&mut ctx.rng, n);
    let u = random_unitary(&mut ctx.rng, n);
    ctx.record("x", &x);
    ctx.record("u", &u);
    let back = unitary_to_point(&cayley_to_unitary(&x)?)?;
    let again = cayley_to_unitary(&unitary_to_point(&u)?)?;
    Ok(back.distance(&x).max(elem_rel(&again, &u)))
}

fn hermitian_torsor_para_associativity(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let p: Vec<_> = (0..5).map(|_| random_universe_point(&mut ctx.rng, n)).collect();
    ctx.record("points", &p);
    let (x, y, z, v, w) = (&p[0], &p[1], &p[2], &p[3], &p[4]);
    let left = unitary_torsor(&unitary_torsor(x, y, z)?, v, w)?;
    let middle = unitary_torsor(x, &unitary_torsor(v, z, y)?, w)?;
    let right = unitary_torsor(x, y, &unitary_torsor(z, v, w)?)?;
    let idem = unitary_torsor(x, x, y)?.distance(y).max(unitary_torsor(x, y, y)?.distance(x));
    Ok(max_of([left.distance(&middle), left.distance(&right), idem]))
}

fn hermitian_torsor_cayley(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let u: Vec<_> = (0..3).map(|_| random_unitary(&mut ctx.rng, n)).collect();
    ctx.record("unitaries", &u);
    let p: Vec<_> = u.iter().map(unitary_to_point).collect::<Result<_>>()?;
    let t = cayley_to_unitary(&unitary_torsor(&p[0], &p[1], &p[2])?)?;
    let expected = u[0].mul(&u[1].adjoint())?.mul(&u[2])?;
    Ok(elem_rel(&t, &expected))
}

fn hermitian_s1_square(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let x = random_point(&mut ctx.rng, n)?;
    let y = random_universe_point(&mut ctx.rng, n);
    ctx.record("x", &x);
    ctx.record("y", &y);
    let sq = |p: &SubspacePoint| s1_action(FRAC_PI_2, &s1_action(FRAC_PI_2, p));
    Ok(sq(&x).distance(&beta(&x)).max(sq(&y).distance(&beta(&y))))
}

fn hermitian_beta_fixed_points(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let (north, south) = poles(n);
    let x = random_point(&mut ctx.rng, n)?;
    ctx.record("x", &x);
    let poles_fixed = beta(&north) == north && beta(&south) == south;
    Ok(flag(poles_fixed && beta(&x).distance(&x) > 1e-6))
}

fn hermitian_tangent_algebra(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let a = random_universe_point(&mut ctx.rng, n);
    let p = random_points(ctx, 3)?;
    ctx.record("a", &a);
    ctx.record("points", &p);
    let e = tangent_unit(&a)?;
    let m = |x: &SubspacePoint, y: &SubspacePoint| tangent_product(&a, x, y);
    let mut res = vec![m(&m(&p[0], &p[1])?, &p[2])?.distance(&m(&p[0], &m(&p[1], &p[2])?)?)];
    for q in &p {
        res.push(m(&e, q)?.distance(q));
        res.push(m(q, &e)?.distance(q));
    }
    Ok(max_of(res))
}

fn random_chart(ctx: &mut Ctx) -> Result<Chart> {
    let n = ctx.n;
    let h = random_point(&mut ctx.rng, n)?;
    let o = random_point(&mut ctx.rng, n)?;
    Chart::new(&h, &o)
}

fn hermitian_rank_chart_independence(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let x = random_elem(&mut ctx.rng, n);
    let k = index(&mut ctx.rng, n + 1);
    let mut y = x.matrix().clone();
    for _ in 0..k {
        let u = random_unit_vector(&mut ctx.rng, n);
        let v = random_unit_vector(&mut ctx.rng, n);
        y += CMatrix::from_fn(n, n, |i, j| u[i] * v[j].conj());
    }
    let (px, py) = (point_from_chart(&x), point_from_chart(&AlgElem::new(y)?));
    ctx.record("x", &px);
    ctx.record("y", &py);
    let (c1, c2) = (random_chart(ctx)?, random_chart(ctx)?);
    let (d1, d2) = (arithmetic_distance_in(&c1, &px, &py)?, arithmetic_distance_in(&c2, &px, &py)?);
    Ok(flag(d1 == k && d2 == k))
}

fn second_singular_ratio(m: &CMatrix, scale: f64) -> f64 {
    let s = singular_values(m);
    s.get(1).copied().unwrap_or(0.0) / scale
}

fn hermitian_intrinsic_line(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let y = random_elem(&mut ctx.rng, n);
    let u = random_unit_vector(&mut ctx.rng, n);
    let v = random_unit_vector(&mut ctx.rng, n);
    let x = AlgElem::new(y.matrix() + CMatrix::from_fn(n, n, |i, j| u[i] * v[j].conj()))?;
    let (px, py) = (point_from_chart(&x), point_from_chart(&y));
    let t = gaussian(&mut ctx.rng) * 3.0;
    ctx.record("x", &px);
    ctx.record("y", &py);
    ctx.record("t", &t);
    let other = random_chart(ctx)?;
    let p = intrinsic_line_point_in(&Chart::standard(n), &px, &py, Extended::Finite(t))?;
    let q = intrinsic_line_point_in(&other, &px, &py, Extended::Finite(t))?;
    let (ox, oy, op) = (other.coords(&px)?, other.coords(&py)?, other.coords(&p)?);
    let scale = 1.0 + ox.norm() + oy.norm() + op.norm();
    let std = Chart::standard(n);
    let (sx, sq) = (std.coords(&px)?, std.coords(&q)?);
    Ok(max_of([
        second_singular_ratio(&(&op - &ox), scale),
        second_singular_ratio(&(&op - &oy), scale),
        second_singular_ratio(&(&sq - &sx), 1.0 + sx.norm() + sq.norm()),
    ]))
}

fn hermitian_cyclic_classical(ctx: &mut Ctx) -> Result<f64> {
    let v: Vec<f64> = (0..3).map(|_| random_real(&mut ctx.rng)).collect();
    ctx.record("values", &v);
    let pts: Vec<_> = v.iter().map(|&t| point_from_chart(&AlgElem::from_real_diagonal(&[t]))).collect();
    let classical = cyclic_order(Extended::Finite(v[0]), Extended::Finite(v[1]), Extended::Finite(v[2]))?;
    Ok(flag(cyclic_triple(&pts[0], &pts[1], &pts[2])? == classical))
}

// obstate

fn obstate_conservation(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let a = random_hermitian(&mut ctx.rng, n);
    let rank_one = index(&mut ctx.rng, 2) == 1;
    let w = if rank_one {
        AlgElem::outer(&random_unit_vector(&mut ctx.rng, n))
    } else {
        random_density(&mut ctx.rng, n)
    };
    ctx.record("a", &a);
    ctx.record("w", &w);
    let o = Obstate::standard(&a, &w)?;
    let wa = w.mul(&a)?.trace_normalized();
    let waa = w.mul(&a)?.mul(&a)?.trace_normalized().re;
    let var = waa - wa.re * wa.re;
    let (values, vectors) = a.hermitian_eigen();
    let dist = distribution(&o)?;
    let mut mean = 0.0;
    let mut second = 0.0;
    for (lambda, p) in &dist {
        mean += lambda * p;
        second += lambda * lambda * p;
    }
    let direct: f64 = (0..values.len())
        .map(|i| {
            let v = vectors.column(i);
            values[i] * v.dotc(&(w.matrix() * v)).re
        })
        .sum();
    let pure_ok = is_pure(&o) == (rank_one || n == 1);
    Ok(max_of([
        crel(expectation(&o)?, wa),
        (variance(&o)? - var).abs() / (1.0 + var.abs()),
        (mean - wa.re).abs() / (1.0 + wa.norm()),
        (second - waa).abs() / (1.0 + waa.abs()),
        (direct - wa.re).abs() / (1.0 + wa.norm()),
        flag(pure_ok && is_positive(&o)),
    ]))
}

fn obstate_pure_reduction(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let a = random_hermitian(&mut ctx.rng, n);
    let psi = random_unit_vector(&mut ctx.rng, n);
    ctx.record("a", &a);
    ctx.record("psi", &psi);
    let v = nalgebra::DVector::from_vec(psi.clone());
    let direct = v.dotc(&(a.matrix() * &v));
    Ok(crel(expectation(&Obstate::standard_pure(&a, &psi)?)?, direct))
}

fn weak_copy(o: &Obstate) -> Result<Obstate> {
    new_obstate(
        o.observable().clone(),
        o.state().clone(),
        o.ref_observable().clone(),
        o.ref_state().clone(),
        false,
    )
}

fn obstate_aut_invariance(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let a = random_hermitian(&mut ctx.rng, n);
    let w = random_density(&mut ctx.rng, n);
    let g = random_form_automorphism(&mut ctx.rng, n, 0.3);
    ctx.record("a", &a);
    ctx.record("w", &w);
    ctx.record("g", &g);
    let o = weak_copy(&Obstate::standard(&a, &w)?)?;
    let moved = o.transported(&g)?;
    Ok(crel(expectation(&moved)?, expectation(&o)?))
}

fn random_strong(ctx: &mut Ctx) -> Result<Obstate> {
    let n = ctx.n;
    let a = random_hermitian(&mut ctx.rng, n);
    let w = random_density(&mut ctx.rng, n);
    let g = random_unitary_symmetry(&mut ctx.rng, n);
    Obstate::standard(&a, &w)?.transported(&g)
}

fn obstate_u_covariance(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let o = random_strong(ctx)?;
    let g = random_unitary_symmetry(&mut ctx.rng, n);
    ctx.record("obstate", &o);
    ctx.record("g", &g);
    let moved = o.transported(&g)?;
    let (v1, v2) = (variance(&o)?, variance(&moved)?);
    let (d1, d2) = (distribution(&o)?, distribution(&moved)?);
    if d1.len() != d2.len() {
        return Ok(1.0);
    }
    let dist = d1.iter().zip(&d2).map(|(p, q)| (p.0 - q.0).abs().max((p.1 - q.1).abs()));
    Ok(max_of(dist).max((v1 - v2).abs() / (1.0 + v1.abs())))
}

fn obstate_linearity(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let a = random_hermitian(&mut ctx.rng, n);
    let w = random_psd(&mut ctx.rng, n);
    let t = uniform(&mut ctx.rng, 0.1, 10.0);
    ctx.record("a", &a);
    ctx.record("w", &w);
    ctx.record("t", &t);
    let e1 = expectation(&Obstate::standard(&a, &w)?)?;
    let e2 = expectation(&Obstate::standard(&a, &w.scale_real(t))?)?;
    Ok(crel(e2, e1 * t))
}

fn obstate_distribution(ctx: &mut Ctx) -> Result<f64> {
    let o = random_strong(ctx)?;
    ctx.record("obstate", &o);
    let d = distribution(&o)?;
    let total: f64 = d.iter().map(|p| p.1).sum();
    let negative = max_of(d.iter().map(|p| -p.1));
    Ok((total - 1.0).abs().max(negative))
}

fn obstate_variance_commuting(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let u = random_unitary(&mut ctx.rng, n);
    let lambda: Vec<f64> = (0..n).map(|_| gaussian(&mut ctx.rng)).collect();
    let mut p: Vec<f64> = (0..n).map(|_| uniform(&mut ctx.rng, 0.0, 1.0)).collect();
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    let g = random_unitary_symmetry(&mut ctx.rng, n);
    ctx.record("u", &u);
    ctx.record("lambda", &lambda);
    ctx.record("p", &p);
    ctx.record("g", &g);
    let conj = |d: &[f64]| -> Result<AlgElem> { u.mul(&AlgElem::from_real_diagonal(d))?.mul(&u.adjoint()) };
    let o = Obstate::standard(&conj(&lambda)?, &conj(&p)?)?.transported(&g)?;
    let mean: f64 = lambda.iter().zip(&p).map(|(l, q)| l * q).sum();
    let second: f64 = lambda.iter().zip(&p).map(|(l, q)| l * l * q).sum();
    let classical = second - mean * mean;
    Ok((variance(&o)? - classical).abs() / (1.0 + classical.abs()))
}

fn obstate_pure_expectation(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let a = random_hermitian(&mut ctx.rng, n);
    let psi = random_unit_vector(&mut ctx.rng, n);
    let g = random_unitary_symmetry(&mut ctx.rng, n);
    ctx.record("a", &a);
    ctx.record("psi", &psi);
    ctx.record("g", &g);
    let o = Obstate::standard_pure(&a, &psi)?.transported(&g)?;
    Ok(crel(pure_expectation(&o)?, expectation(&o)?))
}

fn obstate_positivity(ctx: &mut Ctx) -> Result<f64> {
    let n = ctx.n;
    let a = &random_psd(&mut ctx.rng, n) + &AlgElem::identity(n).scale_real(0.05);
    let w = random_density(&mut ctx.rng, n);
    let g = random_form_automorphism(&mut ctx.rng, n, 0.3);
    ctx.record("a", &a);
    ctx.record("w", &w);
    ctx.record("g", &g);
    let o = weak_copy(&Obstate::standard(&a, &w)?)?.transported(&g)?;
    let e = expectation(&o)?;
    Ok(flag(is_cyclically_ordered(&o) && e.re >= -1e-9))
}

// classical

fn classical_n1_bridge(ctx: &mut Ctx) -> Result<f64> {
    let v: Vec<RP1Value> = (0..4).map(|_| random_extended(&mut ctx.rng)).collect();
    ctx.record("values", &v);
    if v.iter().filter(|x| x.is_infinite()).count() > 1 {
        return Ok(0.0);
    }
    let lift = |x: RP1Value| match x {
        Extended::Finite(t) => Extended::Finite(c(t)),
        Extended::Infinity => Extended::Infinity,
    };
    let pts: Vec<_> = v.iter().map(|&x| scalar_point(lift(x))).collect();
    let engine = scalar_cr_trace(&pts[0], &pts[1], &pts[2], &pts[3])?;
    match classical_cr(v[0], v[1], v[2], v[3])? {
        Extended::Finite(x) => Ok(crel(engine, c(x))),
        Extended::Infinity => Ok(1.0),
    }
}

fn mobius(m: &[f64; 4], x: RP1Value) -> RP1Value {
    let (p, q) = match x {
        Extended::Finite(t) => (m[0] * t + m[1], m[2] * t + m[3]),
        Extended::Infinity => (m[0], m[2]),
    };
    if q == 0.0 {
        Extended::Infinity
    } else {
        Extended::Finite(p / q)
    }
}

fn classical_cyclic_mobius(ctx: &mut Ctx) -> Result<f64> {
    let v: Vec<RP1Value> = (0..3).map(|_| random_extended(&mut ctx.rng)).collect();
    let m = [0; 4].map(|_| gaussian(&mut ctx.rng));
    ctx.record("values", &v);
    ctx.record("map", &m.to_vec());
    let det = m[0] * m[3] - m[1] * m[2];
    let w: Vec<RP1Value> = v.iter().map(|&x| mobius(&m, x)).collect();
    if det.abs() < 1e-6 || (0..3).any(|i| (i + 1..3).any(|j| v[i] == v[j])) {
        return Ok(0.0);
    }
    let before = cyclic_order(v[0], v[1], v[2])?;
    let after = cyclic_order(w[0], w[1], w[2])?;
    Ok(flag(after == (before == (det > 0.0))))
}

fn random_base(rng: &mut Rng) -> usize {
    1 + index(rng, 16)
}

fn random_fn(rng: &mut Rng, m: usize) -> ClassicalFn {
    ClassicalFn::from_finite(&(0..m).map(|_| gaussian(rng)).collect::<Vec<_>>())
}

fn random_measure(rng: &mut Rng, m: usize) -> Measure {
    Measure::new((0..m).map(|_| uniform(rng, 0.1, 2.0)).collect()).expect("positive weights")
}

fn random_bijection(rng: &mut Rng, m: usize) -> Bijection {
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    Bijection::new(perm).expect("shuffled identity")
}

fn finite(v: RP1Value) -> Result<f64> {
    v.finite().ok_or_else(|| Error::Degenerate("unexpected infinity".into()))
}

fn close12(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(1.0)
}

fn classical_pairing_axioms(ctx: &mut Ctx) -> Result<f64> {
    let m = random_base(&mut ctx.rng);
    let mu = random_measure(&mut ctx.rng, m);
    let (f, f2, g, h) = (
        random_fn(&mut ctx.rng, m),
        random_fn(&mut ctx.rng, m),
        random_fn(&mut ctx.rng, m),
        random_fn(&mut ctx.rng, m),
    );
    let l = gaussian(&mut ctx.rng);
    ctx.record("mu", &mu);
    ctx.record("f", &f);
    ctx.record("g", &g);
    ctx.record("h", &h);
    let p = |x: &ClassicalFn, y: &ClassicalFn| pairing(&mu, x, y).and_then(finite);
    let lin = |x: &ClassicalFn, y: &ClassicalFn| {
        ClassicalFn::from_finite(
            &x.values.iter().zip(&y.values).map(|(a, b)| l * a.finite().unwrap() + b.finite().unwrap()).collect::<Vec<_>>(),
        )
    };
    let abs = |x: &ClassicalFn| ClassicalFn::from_finite(&x.values.iter().map(|v| v.finite().unwrap().abs()).collect::<Vec<_>>());
    let bilinear_1 = close12(p(&lin(&f, &f2), &g)?, l * p(&f, &g)? + p(&f2, &g)?);
    let bilinear_2 = close12(p(&g, &lin(&f, &f2))?, l * p(&g, &f)? + p(&g, &f2)?);
    let balanced = close12(p(&f.pointwise_mul(&h)?, &g)?, p(&f, &h.pointwise_mul(&g)?)?);
    let positive = flag(p(&abs(&f), &abs(&g))? >= 0.0);
    // monotone convergence on a finite set: f/k decreases to 0
    let (fa, ga) = (abs(&f), abs(&g));
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    for k in 1..=20 {
        let fk = ClassicalFn::from_finite(&fa.values.iter().map(|v| v.finite().unwrap() / f64::from(k)).collect::<Vec<_>>());
        let val = p(&fk, &ga)?;
        monotone &= val <= prev;
        prev = val;
    }
    let tiny = ClassicalFn::from_finite(&fa.values.iter().map(|v| v.finite().unwrap() * 1e-300).collect::<Vec<_>>());
    let continuity = flag(monotone && p(&tiny, &ga)? < 1e-250);
    let mut with_inf = f.clone();
    with_inf.values[0] = Extended::Infinity;
    let one = ClassicalFn::constant(m, Extended::Finite(1.0));
    let extended = flag(pairing(&mu, &with_inf, &one)? == Extended::Infinity);
    Ok(max_of([bilinear_1, bilinear_2, balanced, positive, continuity, extended]))
}

fn classical_radon_nikodym(ctx: &mut Ctx) -> Result<f64> {
    let m = random_base(&mut ctx.rng);
    let mu = random_measure(&mut ctx.rng, m);
    let phi = random_bijection(&mut ctx.rng, m);
    let psi = random_bijection(&mut ctx.rng, m);
    let h = random_fn(&mut ctx.rng, m);
    ctx.record("mu", &mu);
    ctx.record("phi", &phi);
    ctx.record("psi", &psi);
    ctx.record("h", &h);
    let d_phi = density_pushforward(&phi, &mu)?;
    let lhs = finite(mu.integrate(&h.compose(&phi)?)?)?;
    let rhs = finite(mu.integrate(&d_phi.pointwise_mul(&h)?)?)?;
    let d_comp = density_pushforward(&phi.compose(&psi), &mu)?;
    let d_psi = density_pushforward(&psi, &mu)?;
    let chain = d_phi.pointwise_mul(&d_psi.compose(&phi.inverse())?)?;
    Ok(close12(lhs, rhs).max(flag(d_comp.approx_eq(&chain, 1e-12))))
}

fn classical_invariance(ctx: &mut Ctx) -> Result<f64> {
    let m = random_base(&mut ctx.rng);
    let mu = random_measure(&mut ctx.rng, m);
    let phi = random_bijection(&mut ctx.rng, m);
    let f = random_fn(&mut ctx.rng, m);
    let h = random_fn(&mut ctx.rng, m);
    ctx.record("mu", &mu);
    ctx.record("phi", &phi);
    ctx.record("f", &f);
    ctx.record("h", &h);
    Ok(flag(pairing_invariance_check(&phi, &mu, &f, &h)?))
}

fn classical_obstate_value(ctx: &mut Ctx) -> Result<f64> {
    let m = random_base(&mut ctx.rng);
    let f = random_fn(&mut ctx.rng, m);
    let (f1, f0) = (random_fn(&mut ctx.rng, m), random_fn(&mut ctx.rng, m));
    let finf = ClassicalFn::new((0..m).map(|_| random_extended(&mut ctx.rng)).collect());
    ctx.record("f", &f);
    ctx.record("f1", &f1);
    ctx.record("f0", &f0);
    ctx.record("finf", &finf);
    let one = ClassicalFn::constant(m, Extended::Finite(1.0));
    let zero = ClassicalFn::constant(m, Extended::Finite(0.0));
    let inf = ClassicalFn::constant(m, Extended::Infinity);
    let mut worst: f64 = 0.0;
    for p in 0..m {
        let identity = fn_obstate_value(&f, &one, &zero, &inf, p)?;
        worst = worst.max(close12(finite(identity)?, finite(f.values[p])?));
        if let Ok(v) = fn_obstate_value(&f, &f1, &f0, &finf, p) {
            let direct = classical_cr(f.values[p], f1.values[p], f0.values[p], finf.values[p])?;
            worst = worst.max(flag(v == direct));
        }
    }
    Ok(worst)
}

fn classical_real_like(ctx: &mut Ctx) -> Result<f64> {
    let reals: Vec<f64> = (0..4).map(|_| random_real(&mut ctx.rng)).collect();
    let m: Vec<Complex64> = (0..4).map(|_| complex_gaussian(&mut ctx.rng)).collect();
    let generic: Vec<Complex64> = (0..4).map(|_| complex_gaussian(&mut ctx.rng)).collect();
    ctx.record("reals", &reals);
    ctx.record("map", &m);
    ctx.record("generic", &generic);
    let image: Vec<Extended<Complex64>> = reals
        .iter()
        .map(|&t| Extended::Finite((m[0] * t + m[1]) / (m[2] * t + m[3])))
        .collect();
    let gen: Vec<Extended<Complex64>> = generic.iter().map(|&z| Extended::Finite(z)).collect();
    let on_circle = real_like(image[0], image[1], image[2], image[3])?;
    let off_circle = real_like(gen[0], gen[1], gen[2], gen[3])?;
    Ok(flag(on_circle && !off_circle))
}

macro_rules! prop {
    ($id:literal, $summary:literal, $check:expr, $dims:expr, $float:expr) => {
        Property { id: $id, summary: $summary, check: $check, dims: $dims, float: $float, exact: None }
    };
    ($id:literal, $summary:literal, $check:expr, $dims:expr, $float:expr, $exact:expr) => {
        Property { id: $id, summary: $summary, check: $check, dims: $dims, float: $float, exact: Some($exact) }
    };
}

use Check::{Boolean, Residual};
use Dims::{All, Independent, Only};

static REGISTRY: &[Property] = &[
    prop!("algebra.involution", "a** = a, (ab)* = b*a*, (λa)* = λ̄a*, (a+b)* = a*+b*", Residual(1e-12), All, algebra_involution, algebra_involution_exact),
    prop!("algebra.jordan_identity", "Jordan identity for the u-homotope, u Hermitian", Residual(1e-9), All, algebra_jordan_identity, algebra_jordan_identity_exact),
    prop!("algebra.pair_identity", "associative pair identities of (A, A)", Residual(1e-10), All, algebra_pair_identity, algebra_pair_identity_exact),
    prop!("algebra.pstar_positivity", "a b a* ≥ 0 for b ≥ 0", Boolean, All, algebra_pstar_positivity),
    prop!("algebra.pstar_invertibility", "a*a + b*b invertible for invertible b", Boolean, All, algebra_pstar_invertibility),
    prop!("algebra.trace_conjugation", "trace(g a g⁻¹) = trace(a)", Residual(1e-8), All, algebra_trace_conjugation),
    prop!("grassmann.affine_chart", "torsor and scalar action are affine in chart coordinates", Residual(1e-7), All, grassmann_affine_chart),
    prop!("grassmann.group_additive", "group axioms of x ·_y z on U_aa", Residual(1e-7), All, grassmann_group_additive, grassmann_group_additive_exact),
    prop!("grassmann.group_transversal", "group axioms of x ·_y z on U_ab, a ⊤ b", Residual(1e-7), All, grassmann_group_transversal, grassmann_group_transversal_exact),
    prop!("grassmann.basis_invariance", "point equality ignores the stored basis", Residual(1e-9), All, grassmann_basis_invariance),
    prop!("grassmann.transversality_equivariance", "is_transversal(gx, ga) = is_transversal(x, a)", Boolean, All, grassmann_transversality_equivariance),
    prop!("grassmann.projector", "P² = P with image x and kernel a", Residual(1e-9), All, grassmann_projector),
    prop!("grassmann.action", "(gh).x = g.(h.x) and id.x = x", Residual(1e-8), All, grassmann_action),
    prop!("crossratio.n1_reduction", "operator cross-ratio at n = 1 is the classical one", Residual(1e-9), Only(1), crossratio_n1_reduction),
    prop!("crossratio.basis_independence", "trace and det of the kernel ignore stored bases", Residual(1e-8), All, crossratio_basis_independence),
    prop!("crossratio.naturality", "CR(gy, gb; gx, ga) = g CR(y, b; x, a) g⁻¹", Residual(1e-7), All, crossratio_naturality),
    prop!("crossratio.chain", "CR(a,1;0,∞) = a, CR(a,b;c,∞) = R(a,b,c), CR(a,b;0,∞) = a/b", Residual(1e-12), Independent, crossratio_chain, crossratio_chain_exact),
    prop!("crossratio.separation", "CR(a,b;c,d) < 0 iff (c,d) separates (a,b)", Boolean, Independent, crossratio_separation),
    prop!("hermitian.klein_four", "{id, τ, α, β} is a Klein four-group on points", Residual(1e-9), All, hermitian_klein_four),
    prop!("hermitian.aut_omega", "Aut(ω) preserves R", Boolean, All, hermitian_aut_omega),
    prop!("hermitian.affine_part", "points of R transversal to a ∈ R_NS lie in R_NS", Boolean, All, hermitian_affine_part),
    prop!("hermitian.universe", "sampled points of R lie in R_NS", Boolean, All, hermitian_universe),
    prop!("hermitian.u_equivariance", "U preserves R_NS and commutes with the S¹-action", Residual(1e-8), All, hermitian_u_equivariance),
    prop!("hermitian.cayley_round_trip", "R_NS ↔ U(n) round trips", Residual(1e-9), All, hermitian_cayley_round_trip),
    prop!("hermitian.torsor_para_associativity", "para-associativity and idempotency of the unitary torsor", Residual(1e-7), All, hermitian_torsor_para_associativity),
    prop!("hermitian.torsor_cayley", "cay(x ·_y z) = u_x u_y* u_z", Residual(1e-8), All, hermitian_torsor_cayley),
    prop!("hermitian.s1_square", "i² = β as point maps", Residual(1e-9), All, hermitian_s1_square),
    prop!("hermitian.beta_fixed_points", "β fixes the poles and moves random points", Boolean, All, hermitian_beta_fixed_points),
    prop!("hermitian.tangent_algebra", "unit and associativity of the tangent algebra", Residual(1e-7), All, hermitian_tangent_algebra),
    prop!("hermitian.rank_chart_independence", "arithmetic distance agrees in two random charts", Boolean, All, hermitian_rank_chart_independence),
    prop!("hermitian.intrinsic_line", "intrinsic lines agree across charts", Residual(1e-7), All, hermitian_intrinsic_line),
    prop!("hermitian.cyclic_classical", "cyclic_triple at n = 1 is the classical cyclic order", Boolean, Only(1), hermitian_cyclic_classical),
    prop!("obstate.conservation", "standard-frame obstates reproduce density-matrix quantum mechanics", Residual(1e-9), All, obstate_conservation),
    prop!("obstate.pure_reduction", "expectation of ψψ* is ⟨ψ, aψ⟩", Residual(1e-9), All, obstate_pure_reduction),
    prop!("obstate.aut_invariance", "expectation is invariant under Aut(S, τ)", Residual(1e-7), All, obstate_aut_invariance),
    prop!("obstate.u_covariance", "variance and distribution are invariant under U", Residual(1e-8), All, obstate_u_covariance),
    prop!("obstate.linearity", "expectation is linear in an unnormalised state", Residual(1e-9), All, obstate_linearity),
    prop!("obstate.distribution", "spectral weights are nonnegative and sum to 1", Residual(1e-9), All, obstate_distribution),
    prop!("obstate.variance_commuting", "variance of commuting pairs is the classical variance", Residual(1e-9), All, obstate_variance_commuting),
    prop!("obstate.pure_expectation", "intrinsic-line expectation agrees with the trace formula", Residual(1e-6), All, obstate_pure_expectation),
    prop!("obstate.positivity", "cyclically ordered obstates have nonnegative expectation", Boolean, All, obstate_positivity),
    prop!("classical.n1_bridge", "matrix engine at n = 1 matches the classical cross-ratio", Residual(1e-9), Only(1), classical_n1_bridge),
    prop!("classical.cyclic_mobius", "cyclic order is PGL⁺-invariant and reversed by det < 0", Boolean, Independent, classical_cyclic_mobius),
    prop!("classical.pairing_axioms", "pairing is bilinear, balanced, positive and σ-continuous", Residual(1e-12), Independent, classical_pairing_axioms),
    prop!("classical.radon_nikodym", "μ(h∘φ) = μ(φ′h) and the chain rule", Residual(1e-12), Independent, classical_radon_nikodym),
    prop!("classical.invariance", "Π_μ(φ.f, φ.h) = Π_μ(f, h)", Boolean, Independent, classical_invariance),
    prop!("classical.obstate_value", "pointwise obstate values are classical cross-ratios", Residual(1e-12), Independent, classical_obstate_value),
    prop!("classical.real_like", "Möbius images of reals are concyclic, generic points are not", Boolean, Independent, classical_real_like),
];

pub fn registry() -> &'static [Property] {
    REGISTRY
}
