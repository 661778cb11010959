// Exact Gaussian-rational arithmetic for the algebraic identities.

use matryoshka::exact::{self, gq, ExactMatrix, ExactPoint, ExactValue};
use matryoshka::random::rng_from_seed;

pub fn run() -> matryoshka::Result<()> {
    let v = |re: i64| ExactValue::Finite(gq(re, 0));
    let cr = exact::classical_cr(&v(0), &v(1), &v(2), &v(3))?;
    println!("CR(0, 1; 2, 3) = {cr}");

    let mut rng = rng_from_seed(9);
    let a = ExactMatrix::random_integer(&mut rng, 2, 2, 3);
    let b = ExactMatrix::random_integer(&mut rng, 2, 2, 3);
    println!("(ab)* = b*a* exactly: {}", a.mul(&b)?.adjoint() == b.adjoint().mul(&a.adjoint())?);

    let pts: Vec<ExactPoint> = (0..4)
        .map(|_| ExactPoint::from_chart(&ExactMatrix::random_integer(&mut rng, 2, 2, 2)))
        .collect::<matryoshka::Result<_>>()?;
    let inf = ExactPoint::infinity(2);
    let (x, y, z) = (&pts[0], &pts[1], &pts[2]);
    let m = |p: &ExactPoint, q: &ExactPoint| exact::torsor_product(p, y, q, &inf, &inf);
    let sum = m(x, z)?;
    let expected = x.chart_repr()?.sub(&y.chart_repr()?)?.add(&z.chart_repr()?)?;
    println!("x ·_y z = x - y + z in the chart, exactly: {}", sum.chart_repr()? == expected);
    println!("associativity holds exactly: {}", m(&m(x, z)?, &pts[3])? == m(x, &m(z, &pts[3])?)?);
    Ok(())
}

fn main() {
    run().expect("exact example");
}
