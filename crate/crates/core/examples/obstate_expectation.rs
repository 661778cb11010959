// Obstates: expectation, variance, distribution, purity and positivity.

use std::path::Path;

use matryoshka::algebra::random_unit_vector;
use matryoshka::hermitian::random_unitary_symmetry;
use matryoshka::io::load_obstate;
use matryoshka::obstate::{distribution, expectation, is_positive, is_pure, pure_expectation, variance};
use matryoshka::random::rng_from_seed;
use matryoshka::{AlgElem, Obstate};

pub fn run() -> matryoshka::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/example_obstate.json");
    let o = load_obstate(&path)?;
    println!("bundled obstate: expectation {}", expectation(&o)?.re);
    println!("variance {:.6}", variance(&o)?);
    for (value, weight) in distribution(&o)? {
        println!("  P(a = {value:+.3}) = {weight:.3}");
    }
    println!("pure: {}, positive: {}", is_pure(&o), is_positive(&o));

    let mut rng = rng_from_seed(4);
    let a = AlgElem::from_real_diagonal(&[1.0, 2.0, -1.0]);
    let psi = random_unit_vector(&mut rng, 3);
    let pure = Obstate::standard_pure(&a, &psi)?;
    let moved = pure.transported(&random_unitary_symmetry(&mut rng, 3))?;
    println!("pure state: trace formula {:.9}", expectation(&moved)?.re);
    println!("pure state: intrinsic line {:.9}", pure_expectation(&moved)?.re);
    Ok(())
}

fn main() {
    run().expect("obstate example");
}
