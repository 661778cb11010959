//! Exact arithmetic over the Gaussian rationals `Q(i)`.
//!
//! Covers the parts of the theory that need no eigenvalues: the *-algebra
//! identities, subspace points in reduced column-echelon form, projectors and
//! the torsor law, and the classical cross-ratio. Equality is exact.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::random::{index, Rng};

pub type GaussRational = Complex<BigRational>;

pub fn gq(re: i64, im: i64) -> GaussRational {
    Complex::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
}

fn conj(z: &GaussRational) -> GaussRational {
    Complex::new(z.re.clone(), -z.im.clone())
}

/// Exact conversion of a finite double (every double is a dyadic rational).
pub fn from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite value {x}")))
}

pub fn to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// A dense row-major matrix over `Q(i)`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussRational>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format!("{}", self[(r, c)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = GaussRational;

    fn index(&self, (r, c): (usize, usize)) -> &GaussRational {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut GaussRational {
        &mut self.data[r * self.cols + c]
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![GaussRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GaussRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GaussRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_f64_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let rows = re.len();
        let cols = re.first().map_or(0, Vec::len);
        if im.len() != rows || re.iter().chain(im).any(|r| r.len() != cols) {
            return Err(Error::Parse("ragged or mismatched re/im arrays".into()));
        }
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = Complex::new(from_f64(re[r][c])?, from_f64(im[r][c])?);
            }
        }
        Ok(m)
    }

    /// Entries with real and imaginary parts uniform in `[−bound, bound]`.
    pub fn random_integer(rng: &mut Rng, rows: usize, cols: usize, bound: i64) -> Self {
        let width = (2 * bound + 1) as usize;
        let draw = |rng: &mut Rng| index(rng, width) as i64 - bound;
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                let re = draw(rng);
                let im = draw(rng);
                m[(r, c)] = gq(re, im);
            }
        }
        m
    }

    pub fn random_hermitian(rng: &mut Rng, n: usize, bound: i64) -> Self {
        let a = Self::random_integer(rng, n, n, bound);
        a.add(&a.adjoint()).expect("square")
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn to_f64_parts(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let part = |f: &dyn Fn(&GaussRational) -> f64| {
            (0..self.rows)
                .map(|r| (0..self.cols).map(|c| f(&self[(r, c)])).collect())
                .collect()
        };
        (part(&|z| to_f64(&z.re)), part(&|z| to_f64(&z.im)))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: other.rows,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, s: &GaussRational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = a * &other[(k, c)];
                    out[(r, c)] = &out[(r, c)] + prod;
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| conj(&self[(c, r)]))
    }

    pub fn trace(&self) -> GaussRational {
        (0..self.rows.min(self.cols)).fold(GaussRational::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_hermitian(&self) -> bool {
        self.rows == self.cols && *self == self.adjoint()
    }

    /// Reduced row-echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            for c in 0..m.cols {
                m.data.swap(p * m.cols + c, row * m.cols + c);
            }
            let inv = GaussRational::one() / &m[(row, col)];
            for c in 0..m.cols {
                m[(row, c)] = &m[(row, c)] * &inv;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for c in 0..m.cols {
                        let delta = &factor * &m[(row, c)];
                        m[(r, c)] = &m[(r, c)] - delta;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = GaussRational::one();
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(n, n, |r, c| red[(r, n + c)].clone()))
    }

    pub fn block(tl: &Self, tr: &Self, bl: &Self, br: &Self) -> Self {
        let (n, m) = (tl.rows, tl.cols);
        Self::from_fn(n + bl.rows, m + tr.cols, |r, c| match (r < n, c < m) {
            (true, true) => tl[(r, c)].clone(),
            (true, false) => tr[(r, c - m)].clone(),
            (false, true) => bl[(r - n, c)].clone(),
            (false, false) => br[(r - n, c - m)].clone(),
        })
    }

    pub fn stack(top: &Self, bottom: &Self) -> Self {
        Self::from_fn(top.rows + bottom.rows, top.cols, |r, c| {
            if r < top.rows {
                top[(r, c)].clone()
            } else {
                bottom[(r - top.rows, c)].clone()
            }
        })
    }

    pub fn side_by_side(left: &Self, right: &Self) -> Self {
        Self::from_fn(left.rows, left.cols + right.cols, |r, c| {
            if c < left.cols {
                left[(r, c)].clone()
            } else {
                right[(r, c - left.cols)].clone()
            }
        })
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)].clone())
    }
}

/// `⟨xyz⟩⁺ = xyz`.
pub fn pair_triple(x: &ExactMatrix, y: &ExactMatrix, z: &ExactMatrix) -> Result<ExactMatrix> {
    x.mul(y)?.mul(z)
}

/// `⟨xyz⟩⁻ = zyx`.
pub fn pair_triple_minus(x: &ExactMatrix, y: &ExactMatrix, z: &ExactMatrix) -> Result<ExactMatrix> {
    z.mul(y)?.mul(x)
}

pub fn homotope_assoc(a: &ExactMatrix, u: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    a.mul(u)?.mul(b)
}

/// `(a·_u b + b·_u a)/2`.
pub fn homotope_jordan(a: &ExactMatrix, u: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    let s = homotope_assoc(a, u, b)?.add(&homotope_assoc(b, u, a)?)?;
    Ok(s.scale(&Complex::new(BigRational::new(1.into(), 2.into()), BigRational::zero())))
}

/// A point of `A P¹` over `Q(i)`: the span of a `2n × n` matrix of rank `n`,
/// stored in reduced column-echelon form so that equal spans have equal bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPoint {
    basis: ExactMatrix,
}

impl ExactPoint {
    pub fn new(basis: ExactMatrix) -> Result<Self> {
        let (rows, cols) = basis.shape();
        if rows != 2 * cols || cols == 0 {
            return Err(Error::DimensionMismatch {
                expected: 2 * cols,
                got: rows,
            });
        }
        let (red, pivots) = basis.adjoint().rref();
        if pivots.len() < cols {
            return Err(Error::RankDeficient);
        }
        // rref of the adjoint gives the row space of basis*; conjugating back gives column echelon form of basis
        Ok(Self {
            basis: red.adjoint(),
        })
    }

    pub fn from_chart(a: &ExactMatrix) -> Result<Self> {
        Self::new(ExactMatrix::stack(&ExactMatrix::identity(a.rows), a))
    }

    pub fn zero(n: usize) -> Self {
        Self::from_chart(&ExactMatrix::zeros(n, n)).expect("full rank")
    }

    pub fn infinity(n: usize) -> Self {
        Self::new(ExactMatrix::stack(&ExactMatrix::zeros(n, n), &ExactMatrix::identity(n))).expect("full rank")
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn chart_repr(&self) -> Result<ExactMatrix> {
        let n = self.dim();
        let top = self.basis.submatrix(0, 0, n, n);
        let bottom = self.basis.submatrix(n, 0, n, n);
        bottom.mul(&top.inverse().map_err(|_| Error::NotInChart)?)
    }

    pub fn is_transversal(&self, other: &Self) -> bool {
        ExactMatrix::side_by_side(&self.basis, &other.basis).rank() == 2 * self.dim()
    }

    pub fn apply(&self, g: &ExactMatrix) -> Result<Self> {
        Self::new(g.mul(&self.basis)?)
    }
}

/// `[X|A]·diag(I, 0)·[X|A]⁻¹`.
pub fn projector(image: &ExactPoint, kernel: &ExactPoint) -> Result<ExactMatrix> {
    let n = image.dim();
    let frame = ExactMatrix::side_by_side(&image.basis, &kernel.basis);
    let inv = frame.inverse().map_err(|_| Error::NotTransversal("projector image and kernel".into()))?;
    let d = ExactMatrix::block(
        &ExactMatrix::identity(n),
        &ExactMatrix::zeros(n, n),
        &ExactMatrix::zeros(n, n),
        &ExactMatrix::zeros(n, n),
    );
    frame.mul(&d)?.mul(&inv)
}

pub fn m_operator(x: &ExactPoint, a: &ExactPoint, b: &ExactPoint, z: &ExactPoint) -> Result<ExactMatrix> {
    projector(x, a)?.sub(&projector(b, z)?)
}

pub fn torsor_product(x: &ExactPoint, y: &ExactPoint, z: &ExactPoint, a: &ExactPoint, b: &ExactPoint) -> Result<ExactPoint> {
    y.apply(&m_operator(x, a, b, z)?)
}

/// An extended Gaussian rational for the classical cross-ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactValue {
    Finite(GaussRational),
    Infinity,
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Infinity => write!(f, "inf"),
            Self::Finite(z) if z.im.is_zero() => write!(f, "{}", z.re),
            Self::Finite(z) => write!(f, "{} + {}i", z.re, z.im),
        }
    }
}

impl ExactValue {
    fn homogeneous(&self) -> (GaussRational, GaussRational) {
        match self {
            Self::Finite(z) => (z.clone(), GaussRational::one()),
            Self::Infinity => (GaussRational::one(), GaussRational::zero()),
        }
    }
}

fn omega(u: &ExactValue, v: &ExactValue) -> GaussRational {
    let (u1, u2) = u.homogeneous();
    let (v1, v2) = v.homogeneous();
    u1 * v2 - u2 * v1
}

/// `ω(c,a)·ω(d,b) / (ω(c,b)·ω(d,a))` in homogeneous coordinates.
pub fn classical_cr(a: &ExactValue, b: &ExactValue, c: &ExactValue, d: &ExactValue) -> Result<ExactValue> {
    let num = omega(c, a) * omega(d, b);
    let den = omega(c, b) * omega(d, a);
    match (num.is_zero(), den.is_zero()) {
        (true, true) => Err(Error::Indeterminate),
        (false, true) => Ok(ExactValue::Infinity),
        _ => Ok(ExactValue::Finite(num / den)),
    }
}

/// `R(c, b, a) = (c − a)/(b − a)` via `CR(c, b; a, ∞)`.
pub fn ratio(c: &ExactValue, b: &ExactValue, a: &ExactValue) -> Result<ExactValue> {
    classical_cr(c, b, a, &ExactValue::Infinity)
}

pub fn random_rational(rng: &mut Rng, bound: i64) -> BigRational {
    let width = (2 * bound + 1) as usize;
    let num = index(rng, width) as i64 - bound;
    let den = 1 + index(rng, bound as usize) as i64;
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng_from_seed;

    #[test]
    fn inverse_and_identities() {
        let mut rng = rng_from_seed(1);
        for n in 1..5 {
            let a = ExactMatrix::random_integer(&mut rng, n, n, 3);
            let b = ExactMatrix::random_integer(&mut rng, n, n, 3);
            assert_eq!(a.mul(&b).unwrap().adjoint(), b.adjoint().mul(&a.adjoint()).unwrap());
            assert_eq!(a.adjoint().adjoint(), a);
            if let Ok(inv) = a.inverse() {
                assert_eq!(a.mul(&inv).unwrap(), ExactMatrix::identity(n));
                // conjugation invariance of the trace
                let c = inv.mul(&b).unwrap().mul(&a).unwrap();
                assert_eq!(c.trace(), b.trace());
            }
        }
        let singular = ExactMatrix::from_fn(2, 2, |_, _| gq(1, 1));
        assert_eq!(singular.inverse(), Err(Error::Singular));
    }

    #[test]
    fn canonical_points() {
        let mut rng = rng_from_seed(2);
        let n = 3;
        let a = ExactMatrix::random_integer(&mut rng, n, n, 4);
        let p = ExactPoint::from_chart(&a).unwrap();
        let g = loop {
            let g = ExactMatrix::random_integer(&mut rng, n, n, 2);
            if g.inverse().is_ok() {
                break g;
            }
        };
        let q = ExactPoint::new(p.basis().mul(&g).unwrap()).unwrap();
        assert_eq!(p, q);
        assert_eq!(q.chart_repr().unwrap(), a);
        assert!(ExactPoint::zero(n).is_transversal(&ExactPoint::infinity(n)));
    }

    #[test]
    fn torsor_in_the_chart() {
        let mut rng = rng_from_seed(3);
        let n = 2;
        let invertible = |rng: &mut Rng| loop {
            let g = ExactMatrix::random_integer(rng, n, n, 3);
            if g.inverse().is_ok() {
                return g;
            }
        };
        let (x, y, z) = (invertible(&mut rng), invertible(&mut rng), invertible(&mut rng));
        let p = torsor_product(
            &ExactPoint::from_chart(&x).unwrap(),
            &ExactPoint::from_chart(&y).unwrap(),
            &ExactPoint::from_chart(&z).unwrap(),
            &ExactPoint::infinity(n),
            &ExactPoint::zero(n),
        )
        .unwrap();
        let expected = x.mul(&y.inverse().unwrap()).unwrap().mul(&z).unwrap();
        assert_eq!(p.chart_repr().unwrap(), expected);
    }

    #[test]
    fn exact_cross_ratio() {
        let f = |k: i64| ExactValue::Finite(gq(k, 0));
        let v = classical_cr(&f(0), &f(1), &f(2), &f(3)).unwrap();
        let four_thirds = Complex::new(BigRational::new(4.into(), 3.into()), BigRational::zero());
        assert_eq!(v, ExactValue::Finite(four_thirds));
        assert_eq!(
            classical_cr(&f(5), &f(1), &f(0), &ExactValue::Infinity).unwrap(),
            ExactValue::Finite(gq(5, 0))
        );
        assert_eq!(classical_cr(&f(1), &f(1), &f(1), &f(2)), Err(Error::Indeterminate));
    }
}
