// The commutative model: RP¹-valued functions, measures, pairings and densities.

use matryoshka::classical::{
    cyclic_order, density_action, density_pushforward, fn_obstate_value, function_action, pairing,
    pairing_invariance_check, separates,
};
use matryoshka::{Bijection, ClassicalFn, Extended, Measure};

pub fn run() -> matryoshka::Result<()> {
    let f = Extended::Finite;
    println!("(0, 1, ∞) cyclic: {}", cyclic_order(f(0.0), f(1.0), Extended::Infinity)?);
    println!("(2, 3) separates (0, 1): {}", separates(f(0.0), f(1.0), f(2.0), f(3.0))?);
    println!("(0.5, 3) separates (0, 1): {}", separates(f(0.0), f(1.0), f(0.5), f(3.0))?);

    let obs = ClassicalFn::from_finite(&[1.0, -2.0, 0.5]);
    let one = ClassicalFn::constant(3, f(1.0));
    let zero = ClassicalFn::constant(3, f(0.0));
    let inf = ClassicalFn::constant(3, Extended::Infinity);
    let values: Vec<_> = (0..3).map(|p| fn_obstate_value(&obs, &one, &zero, &inf, p)).collect::<matryoshka::Result<_>>()?;
    let shown: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    println!("obstate values in the standard frame: {}", shown.join(", "));

    let mu = Measure::new(vec![1.0, 2.0, 0.5])?;
    let h = ClassicalFn::from_finite(&[0.2, 0.3, 0.5]);
    println!("Π_μ(f, h) = {}", pairing(&mu, &obs, &h)?);
    let phi = Bijection::new(vec![2, 0, 1])?;
    let dens: Vec<String> = density_pushforward(&phi, &mu)?.values.iter().map(|v| v.to_string()).collect();
    println!("φ′ = {}", dens.join(", "));
    let moved = pairing(&mu, &function_action(&phi, &obs)?, &density_action(&phi, &mu, &h)?)?;
    println!("Π_μ(φ.f, φ.h) = {moved}");
    println!("invariant: {}", pairing_invariance_check(&phi, &mu, &obs, &h)?);
    Ok(())
}

fn main() {
    run().expect("classical example");
}
