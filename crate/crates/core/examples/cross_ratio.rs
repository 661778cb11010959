// Operator-valued cross-ratio and its classical reduction at n = 1.

use matryoshka::classical::{classical_cr, ratio};
use matryoshka::crossratio::{operator_cr, scalar_cr_trace};
use matryoshka::grassmann::{point_from_chart, point_from_dual_chart, random_map, apply_map, random_point};
use matryoshka::random::rng_from_seed;
use matryoshka::{AlgElem, Extended, SubspacePoint};

fn real_point(t: f64) -> SubspacePoint {
    point_from_chart(&AlgElem::from_real_diagonal(&[t]))
}

pub fn run() -> matryoshka::Result<()> {
    let f = Extended::Finite;
    println!("CR(0, 1; 2, 3) = {}", classical_cr(f(0.0), f(1.0), f(2.0), f(3.0))?);
    println!("CR(5, 1; 0, ∞) = {}", classical_cr(f(5.0), f(1.0), f(0.0), Extended::Infinity)?);
    println!("R(5, 3, 1) = {}", ratio(f(5.0), f(3.0), f(1.0))?);

    let k = scalar_cr_trace(&real_point(0.0), &real_point(1.0), &real_point(2.0), &real_point(3.0))?;
    println!("matrix engine at n = 1: {}", k.re);

    // in the frame (0, ∞) the kernel is the product of the chart operators
    let n = 3;
    let a = AlgElem::from_real_diagonal(&[1.0, 2.0, 3.0]);
    let w = AlgElem::from_real_diagonal(&[0.5, 0.25, 0.25]);
    let cr = operator_cr(&point_from_chart(&a), &point_from_dual_chart(&w), &SubspacePoint::zero(n), &SubspacePoint::infinity(n))?;
    println!("trace CR(a, w; 0, ∞) = {:.12} = trace(wa)", cr.trace().re);

    let mut rng = rng_from_seed(3);
    let pts: Vec<_> = (0..4).map(|_| random_point(&mut rng, 2)).collect::<matryoshka::Result<_>>()?;
    let g = random_map(&mut rng, 2)?;
    let moved: Vec<_> = pts.iter().map(|p| apply_map(&g, p)).collect();
    let before = operator_cr(&pts[0], &pts[1], &pts[2], &pts[3])?.trace();
    let after = operator_cr(&moved[0], &moved[1], &moved[2], &moved[3])?.trace();
    println!("GL(4)-invariance of the trace: |Δ| = {:.2e}", (before - after).norm());
    Ok(())
}

fn main() {
    run().expect("cross-ratio example");
}
