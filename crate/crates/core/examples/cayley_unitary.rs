// The Cayley transform R_NS ≅ U(n) and the unitary torsor.

use matryoshka::algebra::random_unitary;
use matryoshka::hermitian::{cayley_to_unitary, membership, unitary_to_point, unitary_torsor, Space};
use matryoshka::grassmann::point_from_chart;
use matryoshka::random::rng_from_seed;
use matryoshka::{AlgElem, SubspacePoint};

pub fn run() -> matryoshka::Result<()> {
    let n = 2;
    println!("cay(0) = -I: {}", cayley_to_unitary(&SubspacePoint::zero(n))?.approx_eq(&AlgElem::identity(n).scale_real(-1.0)));
    println!("cay(∞) = I: {}", cayley_to_unitary(&SubspacePoint::infinity(n))?.approx_eq(&AlgElem::identity(n)));
    let h = point_from_chart(&AlgElem::from_real_diagonal(&[1.0, 0.0]));
    let u = cayley_to_unitary(&h)?;
    let d = u.matrix().diagonal();
    println!("cay([I; diag(1, 0)]) = diag({:.3}i, {:.3})", d[0].im, d[1].re);

    let mut rng = rng_from_seed(11);
    let (ux, uy, uz) = (random_unitary(&mut rng, n), random_unitary(&mut rng, n), random_unitary(&mut rng, n));
    let (x, y, z) = (unitary_to_point(&ux)?, unitary_to_point(&uy)?, unitary_to_point(&uz)?);
    let t = unitary_torsor(&x, &y, &z)?;
    let expected = ux.mul(&uy.adjoint())?.mul(&uz)?;
    println!("torsor lands in R_NS: {}", membership(&t, Space::Rns));
    println!("cay(x ·_y z) = u_x u_y* u_z: {}", cayley_to_unitary(&t)?.approx_eq_tol(&expected, 1e-8));
    Ok(())
}

fn main() {
    run().expect("cayley example");
}
