// The *-algebra M(n, C): involution, order, homotopes and the associative pair.

use matryoshka::algebra::{homotope_jordan, pair_triple, pair_triple_minus, random_hermitian, random_psd};
use matryoshka::random::rng_from_seed;
use matryoshka::AlgElem;

pub fn run() -> matryoshka::Result<()> {
    let mut rng = rng_from_seed(1);
    let a = AlgElem::from_rows(&[vec![1.0, 2.0], vec![0.0, -1.0]], &[vec![0.0, 1.0], vec![0.5, 0.0]])?;
    let (re, im) = a.herm_decompose();
    println!("a = re + i·im with re, im Hermitian: {} {}", re.is_hermitian(), im.is_hermitian());

    let b = random_psd(&mut rng, 2);
    let conj = a.mul(&b)?.mul(&a.adjoint())?;
    println!("a b a* is psd for psd b: {}", conj.is_psd());
    println!("0 ≤ b: {}", AlgElem::zeros(2).leq(&b));

    let u = random_hermitian(&mut rng, 2);
    let x = random_hermitian(&mut rng, 2);
    let y = random_hermitian(&mut rng, 2);
    let j = |p: &AlgElem, q: &AlgElem| homotope_jordan(p, &u, q);
    let x2 = j(&x, &x)?;
    let lhs = j(&x, &j(&y, &x2)?)?;
    let rhs = j(&j(&x, &y)?, &x2)?;
    println!("Jordan identity residual: {:.2e}", (lhs.matrix() - rhs.matrix()).norm());

    let plus = pair_triple(&a, &b, &u)?;
    let minus = pair_triple_minus(&a, &b, &u)?;
    println!("<a b u>+ = abu, <a b u>- = uba: {}", plus.approx_eq(&a.mul(&b)?.mul(&u)?) && minus.approx_eq(&u.mul(&b)?.mul(&a)?));
    Ok(())
}

fn main() {
    run().expect("algebra example");
}
