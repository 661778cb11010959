//! Obstates: an observable `A` and a state `W` measured against a reference
//! part `(A₀, W∞)`.
//!
//! Observables are points of `R`; with the reference frame `(0, ∞)` the
//! observable `a` is the graph `[I; a]`. States are points of `R′`; in the same
//! frame the density matrix `w` is the dual graph `[w; I]`, so that singular and
//! pure states are allowed and the expectation value is `trace(w·a)`.

use num_complex::Complex64;

use crate::algebra::{AlgElem, CMatrix, TOL};
use crate::classical::{classical_cr, Extended};
use crate::crossratio::kernel;
use crate::error::{Error, Result};
use crate::grassmann::{
    apply_map, chart_repr, dual_chart_repr, is_transversal, point_from_chart, point_from_dual_chart, SubspacePoint,
};
use crate::hermitian::{
    alpha, arithmetic_distance, common_chart, cyclic_triple, membership, transport_to_origin, Space,
};

/// A complete obstate `(A, W; A₀, W∞)`, optionally strong.
#[derive(Debug, Clone)]
pub struct Obstate {
    observable: SubspacePoint,
    state: SubspacePoint,
    ref_observable: SubspacePoint,
    ref_state: SubspacePoint,
    strong: bool,
}

fn transversality(x: &SubspacePoint, y: &SubspacePoint, clause: &str) -> Result<()> {
    if is_transversal(x, y) {
        Ok(())
    } else {
        Err(Error::Transversality(clause.to_string()))
    }
}

fn member(x: &SubspacePoint, space: Space, clause: &str) -> Result<()> {
    if membership(x, space) {
        Ok(())
    } else {
        Err(Error::Membership(clause.to_string()))
    }
}

pub fn new_obstate(
    a: SubspacePoint,
    w: SubspacePoint,
    a0: SubspacePoint,
    winf: SubspacePoint,
    strong: bool,
) -> Result<Obstate> {
    let n = a.dim();
    for p in [&w, &a0, &winf] {
        if p.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.dim() });
        }
    }
    member(&a, Space::R, "A in R")?;
    member(&a0, Space::R, "A0 in R")?;
    member(&w, Space::Rprime, "W in R'")?;
    member(&winf, Space::Rprime, "Winf in R'")?;
    transversality(&a0, &winf, "A0 transversal to Winf")?;
    transversality(&a0, &w, "A0 transversal to W")?;
    transversality(&a, &winf, "A transversal to Winf")?;
    if strong {
        if alpha(&a0) != winf {
            return Err(Error::NotAntipodal);
        }
        if !membership(&a0, Space::Rns) {
            return Err(Error::NotInUniverse);
        }
    }
    Ok(Obstate {
        observable: a,
        state: w,
        ref_observable: a0,
        ref_state: winf,
        strong,
    })
}

impl Obstate {
    pub fn new(a: SubspacePoint, w: SubspacePoint, a0: SubspacePoint, winf: SubspacePoint, strong: bool) -> Result<Self> {
        new_obstate(a, w, a0, winf, strong)
    }

    /// The strong obstate `([I; a], [w; I]; 0, ∞)` of textbook quantum mechanics.
    pub fn standard(a: &AlgElem, w: &AlgElem) -> Result<Self> {
        if a.dim() != w.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), got: w.dim() });
        }
        let n = a.dim();
        new_obstate(
            point_from_chart(a),
            point_from_dual_chart(w),
            SubspacePoint::zero(n),
            SubspacePoint::infinity(n),
            true,
        )
    }

    /// The pure state `ψψ*/⟨ψ, ψ⟩` in the standard frame.
    pub fn standard_pure(a: &AlgElem, psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm == 0.0 {
            return Err(Error::Degenerate("zero state vector".into()));
        }
        Self::standard(a, &AlgElem::outer(psi).scale_real(1.0 / norm))
    }

    pub fn observable(&self) -> &SubspacePoint {
        &self.observable
    }

    pub fn state(&self) -> &SubspacePoint {
        &self.state
    }

    pub fn ref_observable(&self) -> &SubspacePoint {
        &self.ref_observable
    }

    pub fn ref_state(&self) -> &SubspacePoint {
        &self.ref_state
    }

    pub fn is_strong(&self) -> bool {
        self.strong
    }

    pub fn dim(&self) -> usize {
        self.observable.dim()
    }

    /// The obstate moved by a projective map; validity is re-checked.
    pub fn transported(&self, g: &crate::grassmann::ProjectiveMap) -> Result<Self> {
        new_obstate(
            apply_map(g, &self.observable),
            apply_map(g, &self.state),
            apply_map(g, &self.ref_observable),
            apply_map(g, &self.ref_state),
            self.strong,
        )
    }
}

/// `trace CR(A, W; A₀, W∞) = trace K_{A₀,W∞}(W, A)`.
pub fn expectation(o: &Obstate) -> Result<Complex64> {
    Ok(kernel(&o.ref_observable, &o.ref_state, &o.state, &o.observable)?.trace())
}

/// Parameter on the line `t ↦ W∞ + t·(W − W∞)` (chart coordinates) where it meets `x` non-transversally.
fn completion_parameter(
    chart: &crate::grassmann::Chart,
    base: &CMatrix,
    direction: &CMatrix,
    x: &SubspacePoint,
) -> Result<Extended<Complex64>> {
    let n = x.dim();
    // det[L(t) | X] is affine in t because L(t) moves by a rank-one matrix.
    // A fixed right factor keeps it affine and balances the columns.
    let r = chart.lift(base).qr().r();
    let rinv = crate::algebra::try_inverse(&r)?;
    let q0 = chart.lift(base) * &rinv;
    let step = chart.lift(&(base + direction)) * &rinv - &q0;
    let sample = |t: f64| {
        let mut full = CMatrix::zeros(2 * n, 2 * n);
        full.view_mut((0, 0), (2 * n, n)).copy_from(&(&q0 + &step * Complex64::new(t, 0.0)));
        full.view_mut((0, n), (2 * n, n)).copy_from(x.basis());
        full.determinant()
    };
    let (f0, f1, f2) = (sample(0.0), sample(1.0), sample(2.0));
    // [Q0 | X] has orthonormal halves, so |f(0)| ≤ 1 and |f′| ≤ ‖step‖.
    let slope_scale = step.norm().max(f64::MIN_POSITIVE);
    if (f2 - (f1 * 2.0 - f0)).norm() > 1e-6 * (1.0 + slope_scale) {
        return Err(Error::NotPure);
    }
    let slope = f1 - f0;
    if slope.norm() <= 1e-10 * slope_scale {
        if f0.norm() <= 1e-10 {
            return Err(Error::NonUniqueCompletion);
        }
        return Ok(Extended::Infinity);
    }
    Ok(Extended::Finite(-f0 / slope))
}

/// The classical cross-ratio of the four points `(a, W; a₀, W∞)` on the intrinsic line of the pure state.
pub fn pure_expectation(o: &Obstate) -> Result<Complex64> {
    if arithmetic_distance(&o.state, &o.ref_state)? != 1 {
        return Err(Error::NotPure);
    }
    let chart = common_chart(&o.state, &o.ref_state)?;
    let psi_inf = chart.coords(&o.ref_state)?;
    let direction = chart.coords(&o.state)? - &psi_inf;
    let a = completion_parameter(&chart, &psi_inf, &direction, &o.observable)?;
    let a0 = completion_parameter(&chart, &psi_inf, &direction, &o.ref_observable)?;
    let one = Extended::Finite(Complex64::new(1.0, 0.0));
    let zero = Extended::Finite(Complex64::new(0.0, 0.0));
    match classical_cr(a, one, a0, zero)? {
        Extended::Finite(v) => Ok(v),
        Extended::Infinity => Err(Error::Degenerate("completion points collide with the state".into())),
    }
}

/// `(a, w)` in the tangent algebra at `A₀`, after transporting `A₀ ↦ 0` and `W∞ ↦ ∞`.
fn standard_frame(o: &Obstate) -> Result<(AlgElem, AlgElem)> {
    if !o.strong {
        return Err(Error::NotStrong);
    }
    let g = transport_to_origin(&o.ref_observable)?;
    let a = chart_repr(&apply_map(&g, &o.observable))?;
    let w = dual_chart_repr(&apply_map(&g, &o.state))?;
    Ok((a, w))
}

/// `trace(AWA) − trace(AW)²` computed in the algebra at `A₀`.
pub fn variance(o: &Obstate) -> Result<f64> {
    let (a, w) = standard_frame(o)?;
    let aw = a.mul(&w)?;
    let second = aw.mul(&a)?.trace_normalized();
    let first = aw.trace_normalized();
    Ok((second - first * first).re)
}

/// Spectral distribution `{(λ, trace(w·P_λ))}` of the observable, equal eigenvalues merged.
pub fn distribution(o: &Obstate) -> Result<Vec<(f64, f64)>> {
    let (a, w) = standard_frame(o)?;
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let (values, vectors) = a.hermitian_eigen();
    let spread = values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[start] <= TOL.eq * spread {
            end += 1;
        }
        let block = vectors.columns(start, end - start);
        let proj = block * block.adjoint();
        let weight = (w.matrix() * proj).trace().re;
        let mean = values[start..end].iter().sum::<f64>() / (end - start) as f64;
        out.push((mean, weight));
        start = end;
    }
    Ok(out)
}

/// `(W, W∞)` has arithmetic distance 1.
pub fn is_pure(o: &Obstate) -> bool {
    matches!(arithmetic_distance(&o.state, &o.ref_state), Ok(1))
}

/// `(A₀, W, W∞)` is cyclically ordered.
pub fn is_positive(o: &Obstate) -> bool {
    cyclic_triple(&o.ref_observable, &o.state, &o.ref_state).unwrap_or(false)
}

/// `(A₀, A, W∞)` and `(A₀, W, W∞)` are cyclically ordered; the expectation is then non-negative.
pub fn is_cyclically_ordered(o: &Obstate) -> bool {
    cyclic_triple(&o.ref_observable, &o.observable, &o.ref_state).unwrap_or(false) && is_positive(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{random_density, random_hermitian, random_psd, random_unit_vector};
    use crate::hermitian::{intrinsic_line_point, random_form_automorphism, random_universe_point};
    use crate::random::{rng_from_seed, Rng};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn expectation_is_trace_of_density_times_observable() {
        let mut rng = rng_from_seed(1);
        for n in 1..5 {
            let a = random_hermitian(&mut rng, n);
            let w = random_density(&mut rng, n);
            let o = Obstate::standard(&a, &w).unwrap();
            let expected = w.mul(&a).unwrap().trace_normalized();
            assert!(close(expectation(&o).unwrap(), expected, 1e-9));
            assert!(expectation(&o).unwrap().im.abs() < 1e-9);
        }
    }

    #[test]
    fn bundled_example_value() {
        let a = AlgElem::from_real_diagonal(&[1.0, -1.0]);
        let w = AlgElem::from_real_diagonal(&[0.75, 0.25]);
        let o = Obstate::standard(&a, &w).unwrap();
        assert!(close(expectation(&o).unwrap(), Complex64::new(0.5, 0.0), 1e-12));
        assert!((variance(&o).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn validation_clauses() {
        let n = 2;
        let h = AlgElem::from_real_diagonal(&[1.0, 2.0]);
        let (zero, inf) = (SubspacePoint::zero(n), SubspacePoint::infinity(n));
        // A = W∞ is never transversal to W∞
        let r = new_obstate(inf.clone(), point_from_dual_chart(&h), zero.clone(), inf.clone(), false);
        assert_eq!(r.unwrap_err(), Error::Transversality("A transversal to Winf".into()));
        let skew = point_from_chart(&h.scale(crate::algebra::I));
        let r = new_obstate(skew, point_from_dual_chart(&h), zero.clone(), inf.clone(), false);
        assert_eq!(r.unwrap_err(), Error::Membership("A in R".into()));
        // a reference state that is not the antipode of A0
        let one = SubspacePoint::one(n);
        let r = new_obstate(point_from_chart(&h), point_from_dual_chart(&h), zero.clone(), one, true);
        assert!(matches!(r, Err(Error::NotAntipodal) | Err(Error::Transversality(_))));
        let shifted = point_from_dual_chart(&AlgElem::from_real_diagonal(&[5.0, 5.0]));
        let r = new_obstate(point_from_chart(&h), point_from_dual_chart(&h), zero, shifted, true);
        assert_eq!(r.unwrap_err(), Error::NotAntipodal);
        assert!(Obstate::standard(&h, &h).is_ok());
    }

    #[test]
    fn pure_expectation_matches_expectation() {
        let mut rng = rng_from_seed(2);
        for n in 1..5 {
            let a = random_hermitian(&mut rng, n);
            let psi = random_unit_vector(&mut rng, n);
            let o = Obstate::standard_pure(&a, &psi).unwrap();
            let direct: Complex64 = {
                let av = a.matrix() * nalgebra::DVector::from_vec(psi.clone());
                nalgebra::DVector::from_vec(psi.clone()).dotc(&av)
            };
            assert!(close(pure_expectation(&o).unwrap(), direct, 1e-8), "n = {n}");
            assert!(close(expectation(&o).unwrap(), direct, 1e-9));
        }
    }

    fn random_strong(rng: &mut Rng, n: usize) -> Obstate {
        let base = Obstate::standard(&random_hermitian(rng, n), &random_density(rng, n)).unwrap();
        let g = crate::hermitian::random_unitary_symmetry(rng, n);
        base.transported(&g).unwrap()
    }

    #[test]
    fn pure_expectation_in_a_moved_frame() {
        let mut rng = rng_from_seed(3);
        for n in 1..4 {
            let a = random_hermitian(&mut rng, n);
            let psi = random_unit_vector(&mut rng, n);
            let s = Obstate::standard_pure(&a, &psi).unwrap();
            let o = new_obstate(
                s.observable().clone(),
                s.state().clone(),
                s.ref_observable().clone(),
                s.ref_state().clone(),
                false,
            )
            .unwrap();
            let g = random_form_automorphism(&mut rng, n, 0.3);
            let moved = o.transported(&g).unwrap();
            let e = expectation(&o).unwrap();
            assert!(close(expectation(&moved).unwrap(), e, 1e-7));
            assert!(close(pure_expectation(&moved).unwrap(), e, 1e-6));
        }
    }

    #[test]
    fn pure_expectation_rejects_mixed_states() {
        let o = Obstate::standard(&AlgElem::identity(2), &AlgElem::identity(2).scale_real(0.5)).unwrap();
        assert_eq!(pure_expectation(&o), Err(Error::NotPure));
    }

    #[test]
    fn sharp_measurement_on_the_line() {
        let mut rng = rng_from_seed(4);
        let n = 3;
        let psi = random_unit_vector(&mut rng, n);
        let p = AlgElem::outer(&psi);
        let o = Obstate::standard(&p.scale_real(2.5), &p).unwrap();
        // A = 2.5·ψψ* meets the state's line: the value 2.5 is sharp
        let hit = intrinsic_line_point(o.state(), o.ref_state(), Extended::Finite(0.4)).unwrap();
        assert!(!is_transversal(&hit, o.observable()));
        assert!(variance(&o).unwrap().abs() < 1e-9);
        assert!((pure_expectation(&o).unwrap() - 2.5).norm() < 1e-9);
    }

    #[test]
    fn variance_and_distribution_examples() {
        let a = AlgElem::from_real_diagonal(&[1.0, -2.0, 3.0]);
        let w = AlgElem::from_real_diagonal(&[0.2, 0.3, 0.5]);
        let o = Obstate::standard(&a, &w).unwrap();
        let mean = 0.2 - 0.6 + 1.5;
        let second = 0.2 + 0.3 * 4.0 + 0.5 * 9.0;
        assert!((variance(&o).unwrap() - (second - mean * mean)).abs() < 1e-12);
        let id = Obstate::standard(&AlgElem::identity(3), &w).unwrap();
        assert!(variance(&id).unwrap().abs() < 1e-12);
        let d = distribution(&id).unwrap();
        assert_eq!(d.len(), 1);
        assert!((d[0].0 - 1.0).abs() < 1e-12 && (d[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn moments_are_frame_covariant() {
        let mut rng = rng_from_seed(5);
        for n in 1..4 {
            let a = random_hermitian(&mut rng, n);
            let w = random_density(&mut rng, n);
            let o = Obstate::standard(&a, &w).unwrap();
            let moved = o.transported(&crate::hermitian::random_unitary_symmetry(&mut rng, n)).unwrap();
            assert!((variance(&moved).unwrap() - variance(&o).unwrap()).abs() < 1e-8);
            let (d1, d2) = (distribution(&o).unwrap(), distribution(&moved).unwrap());
            assert_eq!(d1.len(), d2.len());
            for (p, q) in d1.iter().zip(&d2) {
                assert!((p.0 - q.0).abs() < 1e-8 && (p.1 - q.1).abs() < 1e-8);
            }
            let total: f64 = d2.iter().map(|p| p.1).sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn random_strong_obstates_are_valid() {
        let mut rng = rng_from_seed(6);
        for n in 1..4 {
            let o = random_strong(&mut rng, n);
            assert!(o.is_strong());
            let d = distribution(&o).unwrap();
            assert!(d.iter().all(|p| p.1 >= -1e-12));
        }
        let a0 = random_universe_point(&mut rng, 2);
        assert!(membership(&a0, Space::Rns));
    }

    #[test]
    fn weak_obstates_have_no_variance() {
        let h = AlgElem::from_real_diagonal(&[1.0]);
        let o = new_obstate(
            point_from_chart(&h),
            point_from_dual_chart(&h),
            SubspacePoint::zero(1),
            SubspacePoint::infinity(1),
            false,
        )
        .unwrap();
        assert_eq!(variance(&o), Err(Error::NotStrong));
        assert_eq!(distribution(&o), Err(Error::NotStrong));
    }

    #[test]
    fn purity_and_positivity() {
        let mut rng = rng_from_seed(7);
        let n = 3;
        let psi = random_unit_vector(&mut rng, n);
        let a = random_psd(&mut rng, n);
        let pure = Obstate::standard_pure(&a, &psi).unwrap();
        assert!(is_pure(&pure));
        assert!(is_positive(&pure));
        assert!(is_cyclically_ordered(&pure));
        let mixed = Obstate::standard(&a, &AlgElem::identity(n).scale_real(1.0 / n as f64)).unwrap();
        assert!(!is_pure(&mixed));
        let negative = Obstate::standard(&a.scale_real(-1.0), &random_density(&mut rng, n)).unwrap();
        assert!(!is_cyclically_ordered(&negative));
        assert!(is_positive(&negative));
    }

    #[test]
    fn unnormalised_states_scale_linearly() {
        let mut rng = rng_from_seed(8);
        let a = random_hermitian(&mut rng, 3);
        let w = random_psd(&mut rng, 3);
        let e1 = expectation(&Obstate::standard(&a, &w).unwrap()).unwrap();
        let e2 = expectation(&Obstate::standard(&a, &w.scale_real(3.5)).unwrap()).unwrap();
        assert!(close(e2, e1 * 3.5, 1e-9));
    }
}
