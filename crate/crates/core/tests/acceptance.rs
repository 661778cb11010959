//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use matryoshka::sweep::{run_sweep, Backend, Status, SweepConfig, SweepReport, DEFAULT_DIMS};

const SEED: u64 = 20_240_601;

fn sweep(ids: &[&str], n_list: &[usize], trials: u64) -> SweepReport {
    run_sweep(&SweepConfig {
        n_list: n_list.to_vec(),
        trials,
        seed: SEED,
        tol: None,
        properties: ids.iter().map(|s| s.to_string()).collect(),
        backend: Backend::Float,
    })
    .expect("valid sweep configuration")
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn from_reports(reports: &[SweepReport]) -> Outcome {
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for r in reports {
        for p in &r.properties {
            checked += p.pass_count + p.fail_count;
            if p.status != Status::Pass {
                let n = p.n.map_or_else(|| "-".to_string(), |n| n.to_string());
                let repro = p.example_failure.as_ref().map_or("", |f| f.reproducer.as_str());
                failures.push(format!("{} n={n} {}/{} failed {repro}", p.id, p.fail_count, p.pass_count + p.fail_count));
            }
        }
    }
    if failures.is_empty() {
        Outcome { ok: true, detail: format!("{checked} trials") }
    } else {
        Outcome { ok: false, detail: failures.join("; ") }
    }
}

fn within(outcome: Outcome, start: Instant, limit: Duration) -> Outcome {
    let took = start.elapsed();
    if took > limit {
        return Outcome { ok: false, detail: format!("{} but took {took:.1?} > {limit:?}", outcome.detail) };
    }
    Outcome { ok: outcome.ok, detail: format!("{}, {took:.1?}", outcome.detail) }
}

fn conservation() -> Outcome {
    let start = Instant::now();
    let r = from_reports(&[sweep(&["obstate.conservation"], &DEFAULT_DIMS, 1000)]);
    within(r, start, Duration::from_secs(30))
}

fn pure_reduction() -> Outcome {
    from_reports(&[sweep(&["obstate.pure_reduction"], &[2, 3, 4], 500)])
}

fn projective_invariance() -> Outcome {
    from_reports(&[sweep(&["obstate.aut_invariance"], &[1, 2, 3, 4], 100)])
}

fn cross_ratio_calculus() -> Outcome {
    from_reports(&[
        sweep(&["crossratio.naturality"], &DEFAULT_DIMS, 100),
        sweep(&["crossratio.n1_reduction", "crossratio.chain"], &[1], 1000),
    ])
}

fn torsor_and_group() -> Outcome {
    from_reports(&[sweep(
        &[
            "grassmann.group_additive",
            "grassmann.group_transversal",
            "hermitian.torsor_para_associativity",
            "hermitian.torsor_cayley",
        ],
        &DEFAULT_DIMS,
        500,
    )])
}

fn unitary_universe() -> Outcome {
    from_reports(&[
        sweep(&["hermitian.cayley_round_trip"], &DEFAULT_DIMS, 500),
        sweep(&["hermitian.affine_part"], &DEFAULT_DIMS, 100),
        sweep(&["hermitian.universe"], &[1, 2, 3, 4, 5, 6], 1000),
    ])
}

fn poles_and_circle() -> Outcome {
    from_reports(&[sweep(
        &["hermitian.beta_fixed_points", "hermitian.s1_square", "hermitian.klein_four"],
        &DEFAULT_DIMS,
        1000,
    )])
}

fn variance_and_distribution() -> Outcome {
    from_reports(&[sweep(&["obstate.distribution", "obstate.variance_commuting"], &DEFAULT_DIMS, 500)])
}

fn rank_one_geometry() -> Outcome {
    from_reports(&[
        sweep(&["hermitian.rank_chart_independence", "hermitian.intrinsic_line"], &DEFAULT_DIMS, 500),
        sweep(&["obstate.pure_expectation"], &[1, 2, 3, 4], 200),
    ])
}

fn positivity() -> Outcome {
    from_reports(&[sweep(&["obstate.positivity", "crossratio.separation"], &DEFAULT_DIMS, 1000)])
}

fn classical_model() -> Outcome {
    from_reports(&[sweep(
        &["classical.pairing_axioms", "classical.radon_nikodym", "classical.invariance"],
        &[1],
        1000,
    )])
}

fn full_sweep() -> Outcome {
    let start = Instant::now();
    let cfg = SweepConfig { seed: SEED, ..SweepConfig::default() };
    let first = run_sweep(&cfg).expect("default sweep");
    let second = run_sweep(&cfg).expect("default sweep");
    let mut out = from_reports(std::slice::from_ref(&first));
    if first.to_json() != second.to_json() {
        out = Outcome { ok: false, detail: "reports differ between identical runs".into() };
    }
    within(out, start, Duration::from_secs(300))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("conservation rule", conservation),
        ("pure-state reduction", pure_reduction),
        ("projective invariance", projective_invariance),
        ("cross-ratio calculus", cross_ratio_calculus),
        ("torsor and group laws", torsor_and_group),
        ("unitary universe", unitary_universe),
        ("poles and S¹-action", poles_and_circle),
        ("variance and distribution", variance_and_distribution),
        ("rank-one geometry", rank_one_geometry),
        ("positivity and separation", positivity),
        ("classical model", classical_model),
        ("full default sweep", full_sweep),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        let tag = if out.ok { "PASS" } else { "FAIL" };
        println!("{tag}  criterion {:>2}  {name:<26} {}", i + 1, out.detail);
        failed += usize::from(!out.ok);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
