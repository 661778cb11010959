// Arithmetic distance, intrinsic lines and cyclic order.

use matryoshka::algebra::random_unit_vector;
use matryoshka::grassmann::{point_from_chart, point_from_dual_chart};
use matryoshka::hermitian::{arithmetic_distance, cyclic_triple, intrinsic_line_point, is_rank_one_pair, membership, Space};
use matryoshka::random::rng_from_seed;
use matryoshka::{AlgElem, Extended, SubspacePoint};

pub fn run() -> matryoshka::Result<()> {
    let n = 3;
    let zero = SubspacePoint::zero(n);
    println!("dist(0, 1) = {}", arithmetic_distance(&zero, &SubspacePoint::one(n))?);
    let e11 = point_from_chart(&AlgElem::from_real_diagonal(&[1.0, 0.0, 0.0]));
    println!("dist(0, [I; e11]) = {}", arithmetic_distance(&zero, &e11)?);

    let mut rng = rng_from_seed(2);
    let psi = random_unit_vector(&mut rng, n);
    let w = point_from_dual_chart(&AlgElem::outer(&psi));
    println!("ψψ* is pure relative to ∞: {}", is_rank_one_pair(&w, &SubspacePoint::infinity(n))?);

    let x = point_from_chart(&AlgElem::from_real_diagonal(&[0.3]));
    let y = point_from_chart(&AlgElem::from_real_diagonal(&[-1.7]));
    let mid = intrinsic_line_point(&x, &y, Extended::Finite(0.5))?;
    println!("point of the real line through 0.3 and -1.7 lies in R: {}", membership(&mid, Space::R));

    let minus = point_from_chart(&AlgElem::identity(n).scale_real(-1.0));
    let inf = SubspacePoint::infinity(n);
    println!("(0, 1, ∞) cyclic: {}", cyclic_triple(&zero, &SubspacePoint::one(n), &inf)?);
    println!("(0, -1, ∞) cyclic: {}", cyclic_triple(&zero, &minus, &inf)?);
    Ok(())
}

fn main() {
    run().expect("rank example");
}
