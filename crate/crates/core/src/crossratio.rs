//! Operator-valued cross-ratio on `A P¹` and its scalar reductions.
//!
//! For `x ⊤ a`, every `b ⊤ x` is the graph of a map `β: a → x` and every
//! `y ⊤ a` the graph of a map `η: x → a`, both with respect to `W = a ⊕ x`.
//! The kernel `K_{x,a}(b, y) = β∘η` is an endomorphism of `x`, and
//! `CR(y, b; x, a) := K_{x,a}(b, y)`.
//!
//! At `n = 1`, in standard-chart coordinates, `CR(y, b; x, a)` is the classical
//! cross-ratio of the four numbers.

use num_complex::Complex64;

use crate::algebra::{try_inverse, CMatrix};
use crate::error::{Error, Result};
use crate::grassmann::{is_transversal, EndoW, SubspacePoint};

pub use crate::classical::{classical_cr, ratio};

/// An endomorphism of the subspace `x`, written in the stored basis of `x`.
#[derive(Debug, Clone)]
pub struct EndoX {
    pub base_point: SubspacePoint,
    pub matrix: CMatrix,
}

impl EndoX {
    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn det(&self) -> Complex64 {
        self.matrix.determinant()
    }

    /// The operator on `W` acting as `self` on `x` and as zero on `complement`.
    pub fn extend_by_zero(&self, complement: &SubspacePoint) -> Result<EndoW> {
        let n = self.base_point.dim();
        let xb = self.base_point.basis();
        let mut frame = CMatrix::zeros(2 * n, 2 * n);
        frame.view_mut((0, 0), (2 * n, n)).copy_from(xb);
        frame.view_mut((0, n), (2 * n, n)).copy_from(complement.basis());
        let inv = try_inverse(&frame)?;
        let x_coords = inv.rows(0, n).into_owned();
        Ok(EndoW {
            matrix: xb * &self.matrix * x_coords,
        })
    }
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::NotTransversal(what.to_string()))
    }
}

/// `K_{x,a}(b, y) = β∘η ∈ End(x)`.
pub fn kernel(x: &SubspacePoint, a: &SubspacePoint, b: &SubspacePoint, y: &SubspacePoint) -> Result<EndoX> {
    let n = x.dim();
    for p in [a, b, y] {
        if p.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.dim() });
        }
    }
    require(is_transversal(x, a), "x must be transversal to a")?;
    require(is_transversal(b, x), "b must be transversal to x")?;
    require(is_transversal(y, a), "y must be transversal to a")?;

    let mut frame = CMatrix::zeros(2 * n, 2 * n);
    frame.view_mut((0, 0), (2 * n, n)).copy_from(a.basis());
    frame.view_mut((0, n), (2 * n, n)).copy_from(x.basis());
    let inv = try_inverse(&frame)?;

    // b = span [A|X]·[c; d]; c is invertible because b ⊤ x.
    let bd = &inv * b.basis();
    let (c, d) = (bd.rows(0, n).into_owned(), bd.rows(n, n).into_owned());
    let beta = d * try_inverse(&c)?;

    // y = span [A|X]·[c'; d']; d' is invertible because y ⊤ a.
    let yd = &inv * y.basis();
    let (c2, d2) = (yd.rows(0, n).into_owned(), yd.rows(n, n).into_owned());
    let eta = c2 * try_inverse(&d2)?;

    Ok(EndoX {
        base_point: x.clone(),
        matrix: beta * eta,
    })
}

/// `CR(y, b; x, a) = K_{x,a}(b, y)`.
pub fn operator_cr(y: &SubspacePoint, b: &SubspacePoint, x: &SubspacePoint, a: &SubspacePoint) -> Result<EndoX> {
    kernel(x, a, b, y)
}

/// `trace CR(y, b; x, a)`.
pub fn scalar_cr_trace(y: &SubspacePoint, b: &SubspacePoint, x: &SubspacePoint, a: &SubspacePoint) -> Result<Complex64> {
    Ok(kernel(x, a, b, y)?.trace())
}

/// `det CR(y, b; x, a)`.
pub fn scalar_cr_det(y: &SubspacePoint, b: &SubspacePoint, x: &SubspacePoint, a: &SubspacePoint) -> Result<Complex64> {
    Ok(kernel(x, a, b, y)?.det())
}

/// `|⟨x, y⟩|² / (⟨x, x⟩⟨y, y⟩)` for two lines in `C²`.
pub fn transition_probability(x: &SubspacePoint, y: &SubspacePoint) -> Result<f64> {
    if x.dim() != 1 {
        return Err(Error::Dimension(x.dim()));
    }
    if y.dim() != 1 {
        return Err(Error::Dimension(y.dim()));
    }
    let (u, v) = (x.basis().column(0), y.basis().column(0));
    let inner = u.dotc(&v);
    Ok(inner.norm_sqr() / (u.norm_squared() * v.norm_squared()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{random_elem, AlgElem};
    use crate::classical::Extended;
    use crate::grassmann::{apply_map, point_from_chart, point_from_dual_chart, random_map, random_point};
    use crate::random::rng_from_seed;

    fn scalar_point(z: Extended<Complex64>) -> SubspacePoint {
        match z {
            Extended::Finite(v) => point_from_chart(&AlgElem::from_diagonal(&[v])),
            Extended::Infinity => SubspacePoint::infinity(1),
        }
    }

    #[test]
    fn standard_frame_gives_product_of_chart_operators() {
        // b in the dual chart is the graph of β: ∞ → 0, y in the standard chart the graph of η: 0 → ∞.
        let mut rng = rng_from_seed(1);
        for n in 1..5 {
            let (w, v) = (random_elem(&mut rng, n), random_elem(&mut rng, n));
            let (zero, inf) = (SubspacePoint::zero(n), SubspacePoint::infinity(n));
            let k = operator_cr(&point_from_chart(&w), &point_from_dual_chart(&v), &zero, &inf).unwrap();
            // zero's stored basis is ±[I; 0] up to a unitary; compare invariants
            let expected = v.matrix() * w.matrix();
            assert!((k.trace() - expected.trace()).norm() < 1e-9 * (1.0 + expected.trace().norm()));
            assert!((k.det() - expected.determinant()).norm() < 1e-9 * (1.0 + expected.determinant().norm()));
        }
    }

    #[test]
    fn n1_hand_computation() {
        // (y, b; 0, ∞) with y = [1; w] and b = [v; 1]: the value is v·w
        let (w, v) = (Complex64::new(0.3, -1.1), Complex64::new(-2.0, 0.5));
        let t = scalar_cr_trace(
            &point_from_chart(&AlgElem::from_diagonal(&[w])),
            &point_from_dual_chart(&AlgElem::from_diagonal(&[v])),
            &SubspacePoint::zero(1),
            &SubspacePoint::infinity(1),
        )
        .unwrap();
        assert!((t - v * w).norm() < 1e-12);
    }

    #[test]
    fn n1_reduces_to_classical_cross_ratio() {
        let mut rng = rng_from_seed(2);
        for _ in 0..200 {
            let vals: Vec<Extended<Complex64>> = (0..4)
                .map(|_| Extended::Finite(crate::random::complex_gaussian(&mut rng) * 2.0))
                .collect();
            let pts: Vec<_> = vals.iter().map(|&z| scalar_point(z)).collect();
            let k = scalar_cr_trace(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
            let c = classical_cr(vals[0], vals[1], vals[2], vals[3]).unwrap().finite().unwrap();
            assert!((k - c).norm() <= 1e-9 * (1.0 + c.norm()), "{k} vs {c}");
            let d = scalar_cr_det(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
            assert!((d - c).norm() <= 1e-9 * (1.0 + c.norm()));
        }
        // infinity in the a-slot
        let (y, b, x) = (Complex64::new(1.5, 0.0), Complex64::new(-0.5, 0.0), Complex64::new(0.25, 0.0));
        let k = scalar_cr_trace(
            &scalar_point(Extended::Finite(y)),
            &scalar_point(Extended::Finite(b)),
            &scalar_point(Extended::Finite(x)),
            &scalar_point(Extended::Infinity),
        )
        .unwrap();
        let c = classical_cr(Extended::Finite(y), Extended::Finite(b), Extended::Finite(x), Extended::Infinity)
            .unwrap()
            .finite()
            .unwrap();
        assert!((k - c).norm() < 1e-12);
    }

    #[test]
    fn swapping_state_slots_inverts_at_n1() {
        let mut rng = rng_from_seed(3);
        let pts: Vec<_> = (0..4).map(|_| random_point(&mut rng, 1).unwrap()).collect();
        let d1 = scalar_cr_det(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
        let d2 = scalar_cr_det(&pts[1], &pts[0], &pts[2], &pts[3]).unwrap();
        assert!((d1 * d2 - 1.0).norm() < 1e-9);
    }

    #[test]
    fn naturality_as_ambient_operators() {
        let mut rng = rng_from_seed(4);
        let n = 3;
        let pts: Vec<_> = (0..4).map(|_| random_point(&mut rng, n).unwrap()).collect();
        let (x, a, b, y) = (&pts[0], &pts[1], &pts[2], &pts[3]);
        let k = kernel(x, a, b, y).unwrap();
        let g = random_map(&mut rng, n).unwrap();
        let kg = kernel(&apply_map(&g, x), &apply_map(&g, a), &apply_map(&g, b), &apply_map(&g, y)).unwrap();
        let lhs = kg.extend_by_zero(&apply_map(&g, a)).unwrap().matrix;
        let ginv = g.inverse();
        let rhs = g.rep() * k.extend_by_zero(a).unwrap().matrix * ginv.rep();
        assert!((&lhs - &rhs).norm() <= 1e-8 * (1.0 + rhs.norm()));
        assert!((kg.trace() - k.trace()).norm() <= 1e-8 * (1.0 + k.trace().norm()));
    }

    #[test]
    fn invariants_ignore_stored_basis() {
        let mut rng = rng_from_seed(5);
        let n = 2;
        let pts: Vec<_> = (0..4).map(|_| random_point(&mut rng, n).unwrap()).collect();
        let k1 = kernel(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
        let g = crate::algebra::random_invertible(&mut rng, n);
        let x2 = SubspacePoint::new(pts[0].basis() * g.matrix()).unwrap();
        let a2 = SubspacePoint::new(pts[1].basis() * g.adjoint().matrix()).unwrap();
        let k2 = kernel(&x2, &a2, &pts[2], &pts[3]).unwrap();
        assert!((k1.trace() - k2.trace()).norm() < 1e-9 * (1.0 + k1.trace().norm()));
        assert!((k1.det() - k2.det()).norm() < 1e-9 * (1.0 + k1.det().norm()));
    }

    #[test]
    fn kernel_preconditions() {
        let x = SubspacePoint::zero(2);
        let r = kernel(&x, &x, &SubspacePoint::infinity(2), &SubspacePoint::one(2));
        assert!(matches!(r, Err(Error::NotTransversal(_))));
    }

    #[test]
    fn transition_probability_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = SubspacePoint::new(CMatrix::from_column_slice(2, 1, &[Complex64::new(s, 0.0), Complex64::new(s, 0.0)])).unwrap();
        let y = SubspacePoint::zero(1);
        assert!((transition_probability(&x, &y).unwrap() - 0.5).abs() < 1e-15);
        assert!((transition_probability(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            transition_probability(&SubspacePoint::zero(2), &SubspacePoint::zero(2)),
            Err(Error::Dimension(2))
        );
    }
}
