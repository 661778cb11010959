//! The commutative model: `RP¹`-valued functions on a finite set.
//!
//! Values live in `K ∪ {∞}` ([`Extended`]); cross-ratios are evaluated in
//! homogeneous coordinates so that every case with `∞` in some slot is
//! handled exactly, without IEEE infinities. The module also covers the
//! cyclic order of `RP¹`, real-like quadruples in `CP¹`, and pairings and
//! Radon–Nikodym densities for a measure on a finite base set.

use std::fmt;

use num_complex::Complex64;
use num_traits::Num;

use crate::error::{Error, Result};

/// An element of `K ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended<T> {
    Finite(T),
    Infinity,
}

/// `RP¹ = R ∪ {∞}`.
pub type RP1Value = Extended<f64>;
/// `CP¹ = C ∪ {∞}`.
pub type CP1Value = Extended<Complex64>;

impl<T: Num + Copy> Extended<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinity)
    }

    pub fn finite(&self) -> Option<T> {
        match *self {
            Extended::Finite(v) => Some(v),
            Extended::Infinity => None,
        }
    }

    /// Homogeneous coordinates: `z ↦ (z, 1)`, `∞ ↦ (1, 0)`.
    fn homogeneous(&self) -> (T, T) {
        match *self {
            Extended::Finite(v) => (v, T::one()),
            Extended::Infinity => (T::one(), T::zero()),
        }
    }

    /// `x + ∞ = ∞`. Sums of two infinities are also `∞` (one-point compactification).
    pub fn plus(self, other: Self) -> Self {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinity,
        }
    }

    /// `λ·∞ = ∞` for `λ ≠ 0`; `0·∞` is indeterminate.
    pub fn times(self, other: Self) -> Result<Self> {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => Ok(Extended::Finite(a * b)),
            (Extended::Finite(a), Extended::Infinity) | (Extended::Infinity, Extended::Finite(a)) => {
                if a.is_zero() {
                    Err(Error::Indeterminate)
                } else {
                    Ok(Extended::Infinity)
                }
            }
            (Extended::Infinity, Extended::Infinity) => Ok(Extended::Infinity),
        }
    }
}

impl<T> From<T> for Extended<T> {
    fn from(v: T) -> Self {
        Extended::Finite(v)
    }
}

impl fmt::Display for Extended<f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Extended<f64> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" | "+inf" | "-inf" => Ok(Extended::Infinity),
            _ => {
                let v: f64 = t.parse().map_err(|_| Error::Parse(format!("not a number or 'inf': {t:?}")))?;
                if v.is_finite() {
                    Ok(Extended::Finite(v))
                } else {
                    Ok(Extended::Infinity)
                }
            }
        }
    }
}

/// `ω(u, v) = u₁v₂ − u₂v₁`; on finite values this is `u − v`.
fn omega<T: Num + Copy>(u: (T, T), v: (T, T)) -> T {
    u.0 * v.1 - u.1 * v.0
}

fn projectively_equal<T: Num + Copy>(u: Extended<T>, v: Extended<T>) -> bool {
    omega(u.homogeneous(), v.homogeneous()).is_zero()
}

/// `CR(a, b; c, d) = (c − a)(d − b) / ((c − b)(d − a))`.
///
/// Factors pairing `∞` with a finite value cancel to one; a vanishing
/// denominator with non-vanishing numerator gives `∞`.
pub fn classical_cr<T: Num + Copy>(a: Extended<T>, b: Extended<T>, c: Extended<T>, d: Extended<T>) -> Result<Extended<T>> {
    let (a, b, c, d) = (a.homogeneous(), b.homogeneous(), c.homogeneous(), d.homogeneous());
    let num = omega(c, a) * omega(d, b);
    let den = omega(c, b) * omega(d, a);
    match (num.is_zero(), den.is_zero()) {
        (true, true) => Err(Error::Indeterminate),
        (false, true) => Ok(Extended::Infinity),
        _ => Ok(Extended::Finite(num / den)),
    }
}

/// Division ratio `R(c, b, a) = (c − a)/(b − a)`.
pub fn ratio<T: Num + Copy>(c: Extended<T>, b: Extended<T>, a: Extended<T>) -> Result<Extended<T>> {
    use Extended::*;
    match (c, b, a) {
        (_, Infinity, Infinity) => Err(Error::Degenerate("ratio needs a != b".into())),
        (_, Finite(bv), Finite(av)) if bv == av => Err(Error::Degenerate("ratio needs a != b".into())),
        (Finite(cv), Finite(bv), Finite(av)) => Ok(Finite((cv - av) / (bv - av))),
        (Infinity, Finite(_), Finite(_)) => Ok(Infinity),
        (Finite(_), Infinity, Finite(_)) => Ok(Finite(T::zero())),
        (Infinity, Infinity, Finite(_)) => Err(Error::Indeterminate),
        (Finite(_), Finite(_), Infinity) => Ok(Finite(T::one())),
        (Infinity, Finite(_), Infinity) => Err(Error::Indeterminate),
    }
}

/// Image of `x` in the affine chart `U_c`, by `x ↦ −1/(x − c)` (identity for `c = ∞`).
fn chart_at(x: RP1Value, c: RP1Value) -> Option<f64> {
    match (x, c) {
        (Extended::Finite(xv), Extended::Infinity) => Some(xv),
        (Extended::Infinity, Extended::Finite(_)) => Some(0.0),
        (Extended::Finite(xv), Extended::Finite(cv)) if xv != cv => Some(-1.0 / (xv - cv)),
        _ => None,
    }
}

/// `(a, b, c)` is cyclically ordered iff `a < b` in the affine line `U_c`.
pub fn cyclic_order(a: RP1Value, b: RP1Value, c: RP1Value) -> Result<bool> {
    if projectively_equal(a, b) || projectively_equal(b, c) || projectively_equal(a, c) {
        return Err(Error::Degenerate("cyclic order needs three distinct values".into()));
    }
    let (ac, bc) = (chart_at(a, c).expect("a != c"), chart_at(b, c).expect("b != c"));
    Ok(ac < bc)
}

/// `b ∈ ]a, c[`.
pub fn interval_contains(a: RP1Value, c: RP1Value, b: RP1Value) -> Result<bool> {
    cyclic_order(a, b, c)
}

/// Whether `(c, d)` separates `(a, b)`: one of them in `]a, b[`, the other in `]b, a[`.
pub fn separates(a: RP1Value, b: RP1Value, c: RP1Value, d: RP1Value) -> Result<bool> {
    let c_in = interval_contains(a, b, c)?;
    let d_in = interval_contains(a, b, d)?;
    Ok(c_in != d_in)
}

/// Whether four points of `CP¹` lie on a generalised circle (real cross-ratio).
pub fn real_like(a: CP1Value, b: CP1Value, c: CP1Value, d: CP1Value) -> Result<bool> {
    Ok(match classical_cr(a, b, c, d)? {
        Extended::Infinity => true,
        Extended::Finite(z) => z.im.abs() <= 1e-9 * z.norm().max(1.0),
    })
}

/// A function `M → RP¹` on the finite set `M = {0, …, m−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalFn {
    pub values: Vec<RP1Value>,
}

impl ClassicalFn {
    pub fn new(values: Vec<RP1Value>) -> Self {
        Self { values }
    }

    pub fn from_finite(values: &[f64]) -> Self {
        Self {
            values: values.iter().map(|&v| Extended::Finite(v)).collect(),
        }
    }

    pub fn constant(m: usize, v: RP1Value) -> Self {
        Self { values: vec![v; m] }
    }

    pub fn base_size(&self) -> usize {
        self.values.len()
    }

    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        check_len(self.base_size(), other.base_size())?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.times(*b))
            .collect::<Result<_>>()?;
        Ok(Self { values })
    }

    /// `f ∘ φ`.
    pub fn compose(&self, phi: &Bijection) -> Result<Self> {
        check_len(self.base_size(), phi.size())?;
        Ok(Self {
            values: phi.perm.iter().map(|&q| self.values[q]).collect(),
        })
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.base_size() == other.base_size()
            && self.values.iter().zip(&other.values).all(|(a, b)| match (a, b) {
                (Extended::Finite(x), Extended::Finite(y)) => (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0),
                (Extended::Infinity, Extended::Infinity) => true,
                _ => false,
            })
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// A nonnegative weight on each point of `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    weights: Vec<f64>,
}

impl Measure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Parse(format!("measure weight {i} must be finite and nonnegative")));
        }
        Ok(Self { weights })
    }

    pub fn uniform(m: usize) -> Self {
        Self { weights: vec![1.0; m] }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn base_size(&self) -> usize {
        self.weights.len()
    }

    /// `μ(h) = Σ μ_p h(p)`, with null-weight points contributing nothing.
    pub fn integrate(&self, h: &ClassicalFn) -> Result<RP1Value> {
        pairing(self, h, &ClassicalFn::constant(self.base_size(), Extended::Finite(1.0)))
    }

    fn require_positive(&self) -> Result<()> {
        match self.weights.iter().position(|&w| w <= 0.0) {
            Some(i) => Err(Error::ZeroWeight(i)),
            None => Ok(()),
        }
    }
}

/// A bijection `φ` of `M`, stored as `perm[p] = φ(p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bijection {
    perm: Vec<usize>,
}

impl Bijection {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &q in &perm {
            if q >= perm.len() || seen[q] {
                return Err(Error::Parse("not a permutation".into()));
            }
            seen[q] = true;
        }
        Ok(Self { perm })
    }

    pub fn identity(m: usize) -> Self {
        Self { perm: (0..m).collect() }
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    pub fn apply(&self, p: usize) -> usize {
        self.perm[p]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (p, &q) in self.perm.iter().enumerate() {
            inv[q] = p;
        }
        Self { perm: inv }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            perm: other.perm.iter().map(|&q| self.perm[q]).collect(),
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }
}

/// `⟨F, p⟩ = CR(f(p), f₁(p); f₀(p), f_∞(p))`.
pub fn fn_obstate_value(f: &ClassicalFn, f1: &ClassicalFn, f0: &ClassicalFn, finf: &ClassicalFn, p: usize) -> Result<RP1Value> {
    let m = f.base_size();
    for g in [f1, f0, finf] {
        check_len(m, g.base_size())?;
    }
    if p >= m {
        return Err(Error::Parse(format!("index {p} out of range for base size {m}")));
    }
    let (v1, v0, vinf) = (f1.values[p], f0.values[p], finf.values[p]);
    if projectively_equal(v1, v0) || projectively_equal(v1, vinf) || projectively_equal(v0, vinf) {
        return Err(Error::DegenerateReference(p));
    }
    classical_cr(f.values[p], v1, v0, vinf)
}

/// `Π_μ(f, g) = μ(fg)` with extended arithmetic.
///
/// Points of zero weight contribute `0`; an infinite term on a point of
/// positive weight makes the sum `∞`; `0·∞` on such a point is an error.
pub fn pairing(mu: &Measure, f: &ClassicalFn, g: &ClassicalFn) -> Result<RP1Value> {
    check_len(mu.base_size(), f.base_size())?;
    check_len(mu.base_size(), g.base_size())?;
    let mut total = Extended::Finite(0.0);
    for ((&w, fv), gv) in mu.weights.iter().zip(&f.values).zip(&g.values) {
        if w == 0.0 {
            continue;
        }
        let term = Extended::Finite(w).times(fv.times(*gv)?)?;
        total = total.plus(term);
    }
    Ok(total)
}

/// The Radon–Nikodym factor `φ′(q) = μ(φ⁻¹(q)) / μ(q)`, so that `μ(h∘φ) = μ(φ′·h)`.
pub fn density_pushforward(phi: &Bijection, mu: &Measure) -> Result<ClassicalFn> {
    check_len(mu.base_size(), phi.size())?;
    mu.require_positive()?;
    let inv = phi.inverse();
    Ok(ClassicalFn::from_finite(
        &(0..phi.size())
            .map(|q| mu.weights[inv.apply(q)] / mu.weights[q])
            .collect::<Vec<_>>(),
    ))
}

/// The usual action `φ.f = f ∘ φ⁻¹`.
pub fn function_action(phi: &Bijection, f: &ClassicalFn) -> Result<ClassicalFn> {
    f.compose(&phi.inverse())
}

/// The density action `φ.h = φ′ · (h ∘ φ⁻¹)`.
pub fn density_action(phi: &Bijection, mu: &Measure, h: &ClassicalFn) -> Result<ClassicalFn> {
    let d = density_pushforward(phi, mu)?;
    d.pointwise_mul(&function_action(phi, h)?)
}

/// Checks `Π_μ(φ.f, φ.h) = Π_μ(f, h)` with `f` acted on as a function and `h` as a density.
pub fn pairing_invariance_check(phi: &Bijection, mu: &Measure, f: &ClassicalFn, h: &ClassicalFn) -> Result<bool> {
    let lhs = pairing(mu, &function_action(phi, f)?, &density_action(phi, mu, h)?)?;
    let rhs = pairing(mu, f, h)?;
    Ok(match (lhs, rhs) {
        (Extended::Finite(l), Extended::Finite(r)) => (l - r).abs() <= 1e-12 * l.abs().max(r.abs()).max(1.0),
        (Extended::Infinity, Extended::Infinity) => true,
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Extended::{Finite as F, Infinity as Inf};

    fn c(re: f64, im: f64) -> CP1Value {
        F(Complex64::new(re, im))
    }

    #[test]
    fn cross_ratio_examples() {
        assert_eq!(classical_cr(F(0.0), F(1.0), F(2.0), F(3.0)).unwrap(), F(4.0 / 3.0));
        for a in [-3.5, 0.25, 7.0] {
            assert_eq!(classical_cr(F(a), F(1.0), F(0.0), Inf).unwrap(), F(a));
        }
        assert_eq!(classical_cr(F(1.0), F(1.0), F(1.0), F(2.0)), Err(Error::Indeterminate));
        // denominator (c - b) vanishes
        assert_eq!(classical_cr(F(0.0), F(1.0), F(1.0), F(3.0)).unwrap(), Inf);
    }

    #[test]
    fn cross_ratio_with_infinity_in_each_slot() {
        let (a, b, c_, d) = (2.0, -1.0, 0.5, 4.0);
        // limits of the finite formula as one slot tends to infinity
        assert_eq!(classical_cr(Inf, F(b), F(c_), F(d)).unwrap(), F((d - b) / (c_ - b)));
        assert_eq!(classical_cr(F(a), Inf, F(c_), F(d)).unwrap(), F((c_ - a) / (d - a)));
        assert_eq!(classical_cr(F(a), F(b), Inf, F(d)).unwrap(), F((d - b) / (d - a)));
        assert_eq!(classical_cr(F(a), F(b), F(c_), Inf).unwrap(), F((c_ - a) / (c_ - b)));
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(ratio(F(5.0), F(3.0), F(1.0)).unwrap(), F(2.0));
        assert_eq!(ratio(F(0.3), F(1.0), F(0.0)).unwrap(), F(0.3));
        assert!(matches!(ratio(F(1.0), F(2.0), F(2.0)), Err(Error::Degenerate(_))));
        assert_eq!(ratio(F(1.0), F(2.0), Inf).unwrap(), F(1.0));
    }

    #[test]
    fn cyclic_order_examples() {
        assert!(cyclic_order(F(0.0), F(1.0), Inf).unwrap());
        assert!(!cyclic_order(F(1.0), F(0.0), Inf).unwrap());
        // cyclic rotation preserves the order
        assert!(cyclic_order(F(1.0), Inf, F(0.0)).unwrap());
        assert!(cyclic_order(Inf, F(0.0), F(1.0)).unwrap());
        assert!(matches!(cyclic_order(F(1.0), F(1.0), Inf), Err(Error::Degenerate(_))));
    }

    #[test]
    fn real_like_examples() {
        assert!(real_like(c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(5.0, 0.0)).unwrap());
        assert!(!real_like(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), Inf).unwrap());
        assert!(real_like(c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)).unwrap());
    }

    #[test]
    fn obstate_value_examples() {
        let m = 3;
        let f = ClassicalFn::from_finite(&[0.5, -2.0, 9.0]);
        let zero = ClassicalFn::constant(m, F(0.0));
        let one = ClassicalFn::constant(m, F(1.0));
        let inf = ClassicalFn::constant(m, Inf);
        for p in 0..m {
            assert_eq!(fn_obstate_value(&f, &one, &zero, &inf, p).unwrap(), f.values[p]);
        }
        let v = fn_obstate_value(
            &ClassicalFn::from_finite(&[4.0]),
            &ClassicalFn::from_finite(&[5.0]),
            &ClassicalFn::from_finite(&[2.0]),
            &ClassicalFn::constant(1, Inf),
            0,
        )
        .unwrap();
        assert_eq!(v, F(2.0 / 3.0));
        assert_eq!(fn_obstate_value(&f, &one, &one, &inf, 1), Err(Error::DegenerateReference(1)));
    }

    #[test]
    fn obstate_matrix_symmetries() {
        // CR(f, g; f0, g∞): swapping rows or columns preserves it, swapping f and g inverts it.
        let (f, g, f0, ginf) = (F(0.7), F(-1.3), F(2.2), F(5.1));
        let v: f64 = classical_cr(f, g, f0, ginf).unwrap().finite().unwrap();
        let rows = classical_cr(f0, ginf, f, g).unwrap().finite().unwrap();
        let cols = classical_cr(g, f, ginf, f0).unwrap().finite().unwrap();
        let inv = classical_cr(g, f, f0, ginf).unwrap().finite().unwrap();
        assert!((v - rows).abs() < 1e-12);
        assert!((v - cols).abs() < 1e-12);
        assert!((v * inv - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pairing_examples() {
        let mu = Measure::new(vec![0.5, 1.5, 2.0]).unwrap();
        let one = ClassicalFn::constant(3, F(1.0));
        assert_eq!(pairing(&mu, &one, &one).unwrap(), F(4.0));
        let f = ClassicalFn::new(vec![F(1.0), Inf, F(2.0)]);
        assert_eq!(pairing(&mu, &f, &one).unwrap(), Inf);
        let zero_weight = Measure::new(vec![1.0, 0.0, 1.0]).unwrap();
        assert_eq!(pairing(&zero_weight, &f, &one).unwrap(), F(3.0));
        let g = ClassicalFn::new(vec![F(1.0), F(0.0), F(1.0)]);
        assert_eq!(pairing(&mu, &f, &g), Err(Error::Indeterminate));
    }

    #[test]
    fn densities() {
        let mu = Measure::new(vec![1.0, 2.0]).unwrap();
        let swap = Bijection::new(vec![1, 0]).unwrap();
        assert_eq!(density_pushforward(&swap, &mu).unwrap(), ClassicalFn::from_finite(&[2.0, 0.5]));
        assert_eq!(
            density_pushforward(&Bijection::identity(2), &mu).unwrap(),
            ClassicalFn::constant(2, F(1.0))
        );
        let bad = Measure::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(density_pushforward(&swap, &bad), Err(Error::ZeroWeight(1)));
    }

    #[test]
    fn invariance_of_uniform_pairing_under_plain_action() {
        let mu = Measure::uniform(4);
        let phi = Bijection::new(vec![2, 0, 3, 1]).unwrap();
        let f = ClassicalFn::from_finite(&[1.0, -2.0, 0.5, 3.0]);
        let h = ClassicalFn::from_finite(&[0.2, 0.4, -1.0, 2.0]);
        let lhs = pairing(&mu, &function_action(&phi, &f).unwrap(), &function_action(&phi, &h).unwrap()).unwrap();
        assert_eq!(lhs, pairing(&mu, &f, &h).unwrap());
        assert!(pairing_invariance_check(&phi, &mu, &f, &h).unwrap());
        assert!(pairing_invariance_check(&Bijection::identity(4), &mu, &f, &h).unwrap());
    }

    #[test]
    fn parse_extended() {
        assert_eq!("inf".parse::<RP1Value>().unwrap(), Inf);
        assert_eq!(" 2.5 ".parse::<RP1Value>().unwrap(), F(2.5));
        assert!("abc".parse::<RP1Value>().is_err());
        assert_eq!(F(1.5).to_string(), "1.5");
    }
}
