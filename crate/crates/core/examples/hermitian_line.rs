// Involutions τ, α, β, poles, membership in R, R′, R_NS and the S¹-action.

use std::f64::consts::FRAC_PI_2;

use matryoshka::hermitian::{alpha, beta, membership, poles, random_universe_point, s1_action, tau, Space};
use matryoshka::grassmann::point_from_chart;
use matryoshka::random::rng_from_seed;
use matryoshka::{AlgElem, SubspacePoint};

pub fn run() -> matryoshka::Result<()> {
    let n = 2;
    let (north, south) = poles(n);
    println!("β fixes the poles: {} {}", beta(&north) == north, beta(&south) == south);
    println!("τ swaps them: {}", tau(&north) == south);
    println!("α(0) = ∞: {}", alpha(&SubspacePoint::zero(n)) == SubspacePoint::infinity(n));

    let h = point_from_chart(&AlgElem::from_real_diagonal(&[0.3, -2.0]));
    for space in [Space::R, Space::Rprime, Space::Rns] {
        println!("Hermitian graph in {space}: {}", membership(&h, space));
    }
    println!("north pole in R: {}", membership(&north, Space::R));

    let mut rng = rng_from_seed(5);
    let x = random_universe_point(&mut rng, n);
    let twice = s1_action(FRAC_PI_2, &s1_action(FRAC_PI_2, &x));
    println!("i² = β on a random point of R_NS: {}", twice == beta(&x));
    println!("i(0) = 1: {}", s1_action(FRAC_PI_2, &SubspacePoint::zero(n)) == SubspacePoint::one(n));
    Ok(())
}

fn main() {
    run().expect("hermitian example");
}
