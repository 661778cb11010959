// Points of the projective line A P¹ as n-dimensional subspaces of C^{2n}.

use matryoshka::grassmann::{
    chart_repr, is_transversal, point_from_chart, projector, random_point, torsor_product, Chart,
};
use matryoshka::random::rng_from_seed;
use matryoshka::{AlgElem, SubspacePoint};

fn real_diagonal(a: &AlgElem) -> Vec<f64> {
    a.matrix().diagonal().iter().map(|z| (z.re * 1e9).round() / 1e9).collect()
}

pub fn run() -> matryoshka::Result<()> {
    let n = 2;
    let (zero, inf, one) = (SubspacePoint::zero(n), SubspacePoint::infinity(n), SubspacePoint::one(n));
    println!("0 ⊤ ∞: {}, 0 ⊤ 0: {}", is_transversal(&zero, &inf), is_transversal(&zero, &zero));

    let a = AlgElem::from_real_diagonal(&[2.0, -0.5]);
    let x = point_from_chart(&a);
    println!("chart coordinate of [I; a]: {:?}", real_diagonal(&chart_repr(&x)?));

    let p = projector(&zero, &inf)?;
    println!("projector onto 0 along ∞ is idempotent: {}", p.compose(&p).approx_eq(&p));

    // with a = b = ∞ the torsor law is x - y + z in the standard chart
    let b = AlgElem::from_real_diagonal(&[1.0, 1.0]);
    let sum = torsor_product(&x, &zero, &point_from_chart(&b), &inf, &inf)?;
    println!("x ·_0 1 with horizon ∞: {:?}", real_diagonal(&chart_repr(&sum)?));
    println!("x ·_y y = x: {}", torsor_product(&x, &one, &one, &inf, &inf)? == x);

    let mut rng = rng_from_seed(7);
    let (h, o, y) = (random_point(&mut rng, n)?, random_point(&mut rng, n)?, random_point(&mut rng, n)?);
    let chart = Chart::new(&h, &o)?;
    println!("random chart round trip: {}", chart.point(&chart.coords(&y)?) == y);
    Ok(())
}

fn main() {
    run().expect("grassmann example");
}
