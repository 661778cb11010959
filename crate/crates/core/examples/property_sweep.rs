// Running part of the seeded property sweep from code.

use matryoshka::sweep::{registry, run_sweep, Backend, SweepConfig};

pub fn run() -> matryoshka::Result<()> {
    println!("{} registered properties, e.g.:", registry().len());
    for p in registry().iter().take(4) {
        println!("  {:<32} {}", p.id, p.summary);
    }
    let report = run_sweep(&SweepConfig {
        n_list: vec![1, 2],
        trials: 20,
        seed: 7,
        tol: None,
        properties: vec!["hermitian".into(), "crossratio.chain".into()],
        backend: Backend::Float,
    })?;
    print!("{}", report.to_text());
    assert!(report.ok);
    Ok(())
}

fn main() {
    run().expect("sweep example");
}
