//! The matrix *-algebra `M(n, C)`.
//!
//! [`AlgElem`] wraps a square complex matrix and carries the involution
//! (conjugate transpose), the positivity order on Hermitian elements, the
//! matrix trace, the homotope products `a·_u b = aub` and friends, and the
//! associative-pair triple product of the pair `(A, A)`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::random::{self, Rng};

pub type CMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Numerical thresholds used throughout the float backend.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative Frobenius tolerance for element and point equality.
    pub eq: f64,
    /// Relative slack on the smallest eigenvalue in `is_psd`.
    pub psd: f64,
    /// Relative singular-value threshold for invertibility.
    pub inv: f64,
    /// Relative singular-value threshold for transversality of two points.
    pub transversal: f64,
    /// Relative singular-value threshold for ranks of chart differences.
    pub rank: f64,
}

pub const TOL: Tolerances = Tolerances {
    eq: 1e-9,
    psd: 1e-9,
    inv: 1e-10,
    transversal: 1e-8,
    rank: 1e-7,
};

impl Default for Tolerances {
    fn default() -> Self {
        TOL
    }
}

/// Singular values of `m`, largest first.
pub(crate) fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Ratio `σ_min / σ_max`; zero for the zero matrix.
pub(crate) fn inverse_condition(m: &CMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&max), Some(&min)) if max > 0.0 => min / max,
        _ => 0.0,
    }
}

pub(crate) fn numeric_rank(m: &CMatrix, rel: f64) -> usize {
    let s = singular_values(m);
    let Some(&max) = s.first() else { return 0 };
    if max == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rel * max).count()
}

pub(crate) fn try_inverse(m: &CMatrix) -> Result<CMatrix> {
    if inverse_condition(m) <= TOL.inv {
        return Err(Error::Singular);
    }
    m.clone().try_inverse().ok_or(Error::Singular)
}

/// `‖a − b‖_F ≤ tol · max(1, ‖a‖_F, ‖b‖_F)`.
pub(crate) fn matrices_close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    let scale = 1f64.max(a.norm()).max(b.norm());
    (a - b).norm() <= tol * scale
}

/// An element of `A = M(n, C)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgElem(CMatrix);

impl AlgElem {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::Parse("empty matrix".into()));
        }
        Ok(Self(m))
    }

    pub fn zeros(n: usize) -> Self {
        Self(CMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n, n))
    }

    pub fn scalar(n: usize, c: Complex64) -> Self {
        Self(CMatrix::identity(n, n) * c)
    }

    pub fn from_diagonal(d: &[Complex64]) -> Self {
        let n = d.len();
        Self(CMatrix::from_fn(n, n, |i, j| if i == j { d[i] } else { Complex64::new(0.0, 0.0) }))
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let c: Vec<Complex64> = d.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diagonal(&c)
    }

    /// Row-major construction from real and imaginary parts.
    pub fn from_rows(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let n = re.len();
        if im.len() != n || re.iter().chain(im).any(|r| r.len() != n) {
            return Err(Error::Parse("re/im must both be n x n".into()));
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| Complex64::new(re[i][j], im[i][j])))
    }

    /// Rank-one element `v v*`.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        Self(CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self(&self.0 * &other.0))
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }

    pub fn scale_real(&self, r: f64) -> Self {
        self.scale(Complex64::new(r, 0.0))
    }

    /// Splits `a = h + i·k` with `h = (a + a*)/2` and `k = (a − a*)/(2i)`, both Hermitian.
    pub fn herm_decompose(&self) -> (Self, Self) {
        let a_star = self.0.adjoint();
        let h = (&self.0 + &a_star) * Complex64::new(0.5, 0.0);
        let k = (&self.0 - &a_star) * Complex64::new(0.0, -0.5);
        (Self(h), Self(k))
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        matrices_close(&self.0, &other.0, TOL.eq)
    }

    pub fn approx_eq_tol(&self, other: &Self, tol: f64) -> bool {
        matrices_close(&self.0, &other.0, tol)
    }

    pub fn is_hermitian(&self) -> bool {
        matrices_close(&self.0, &self.0.adjoint(), TOL.eq)
    }

    /// Eigenvalues (ascending) and eigenvectors of the Hermitian part.
    ///
    /// Callers are expected to pass Hermitian elements.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, CMatrix) {
        let (h, _) = self.herm_decompose();
        let eig = SymmetricEigen::new(h.0);
        let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = CMatrix::from_fn(self.dim(), idx.len(), |r, c| eig.eigenvectors[(r, idx[c])]);
        (values, vectors)
    }

    /// Hermitian with smallest eigenvalue `≥ −tol_psd·‖a‖`. Non-Hermitian input gives `false`.
    pub fn is_psd(&self) -> bool {
        if !self.is_hermitian() {
            return false;
        }
        let (values, _) = self.hermitian_eigen();
        let slack = TOL.psd * self.norm().max(f64::MIN_POSITIVE);
        values.first().is_none_or(|&min| min >= -slack)
    }

    /// `self ≤ other` in the order of `Herm(A)`.
    pub fn leq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && (other - self).is_psd()
    }

    pub fn is_invertible(&self) -> bool {
        inverse_condition(&self.0) > TOL.inv
    }

    pub fn inverse(&self) -> Result<Self> {
        try_inverse(&self.0).map(Self)
    }

    pub fn is_unitary(&self) -> bool {
        let one = CMatrix::identity(self.dim(), self.dim());
        let tol = TOL.eq * (self.dim() as f64).sqrt().max(1.0);
        (self.0.adjoint() * &self.0 - &one).norm() <= tol && (&self.0 * self.0.adjoint() - &one).norm() <= tol
    }

    /// The matrix trace, which gives 1 on rank-one Hermitian idempotents.
    pub fn trace_normalized(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.determinant()
    }

    /// `a^2` with respect to the Jordan product `a•b = (ab + ba)/2`.
    pub fn jordan_square(&self) -> Self {
        Self(&self.0 * &self.0)
    }
}

impl Add for &AlgElem {
    type Output = AlgElem;
    fn add(self, rhs: &AlgElem) -> AlgElem {
        AlgElem(&self.0 + &rhs.0)
    }
}

impl Sub for &AlgElem {
    type Output = AlgElem;
    fn sub(self, rhs: &AlgElem) -> AlgElem {
        AlgElem(&self.0 - &rhs.0)
    }
}

impl Mul for &AlgElem {
    type Output = AlgElem;
    fn mul(self, rhs: &AlgElem) -> AlgElem {
        AlgElem(&self.0 * &rhs.0)
    }
}

impl Neg for &AlgElem {
    type Output = AlgElem;
    fn neg(self) -> AlgElem {
        AlgElem(-&self.0)
    }
}

fn check3(a: &AlgElem, u: &AlgElem, b: &AlgElem) -> Result<()> {
    a.check_dim(u)?;
    a.check_dim(b)
}

/// Associative homotope product `a·_u b = aub`.
pub fn homotope_assoc(a: &AlgElem, u: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
    check3(a, u, b)?;
    Ok(&(a * u) * b)
}

/// Lie homotope bracket `[a, b]_u = aub − bua`.
pub fn homotope_lie(a: &AlgElem, u: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
    check3(a, u, b)?;
    Ok(&(&(a * u) * b) - &(&(b * u) * a))
}

/// Jordan homotope product `a•_u b = (aub + bua)/2`.
pub fn homotope_jordan(a: &AlgElem, u: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
    check3(a, u, b)?;
    Ok((&(&(a * u) * b) + &(&(b * u) * a)).scale_real(0.5))
}

/// `(e⁺, e⁻)` in the associative pair `(A, A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairElement {
    pub plus: AlgElem,
    pub minus: AlgElem,
}

/// `⟨xyz⟩⁺ = xyz`.
pub fn pair_triple(x: &AlgElem, y: &AlgElem, z: &AlgElem) -> Result<AlgElem> {
    homotope_assoc(x, y, z)
}

/// `⟨xyz⟩⁻ = zyx`.
pub fn pair_triple_minus(x: &AlgElem, y: &AlgElem, z: &AlgElem) -> Result<AlgElem> {
    homotope_assoc(z, y, x)
}

/// Whether `Q_x: y ↦ xyx` is invertible. For matrices this is invertibility of `x`.
pub fn q_operator_invertible(x: &AlgElem) -> bool {
    x.is_invertible()
}

pub fn is_pair_idempotent(e: &PairElement) -> bool {
    let (Ok(p), Ok(m)) = (
        pair_triple(&e.plus, &e.minus, &e.plus),
        pair_triple_minus(&e.minus, &e.plus, &e.minus),
    ) else {
        return false;
    };
    p.approx_eq(&e.plus) && m.approx_eq(&e.minus)
}

/// Matrix of the operator `Q_x: y ↦ xyx` on `C^{n²}` (column-major vectorisation).
pub fn q_operator_matrix(x: &AlgElem) -> CMatrix {
    let n = x.dim();
    let mut q = CMatrix::zeros(n * n, n * n);
    for col in 0..n * n {
        let mut e = CMatrix::zeros(n, n);
        e[(col % n, col / n)] = Complex64::new(1.0, 0.0);
        let img = &x.0 * e * &x.0;
        for row in 0..n * n {
            q[(row, col)] = img[(row % n, row / n)];
        }
    }
    q
}

pub fn random_elem(rng: &mut Rng, n: usize) -> AlgElem {
    AlgElem(random::complex_gaussian_matrix(rng, n, n))
}

pub fn random_hermitian(rng: &mut Rng, n: usize) -> AlgElem {
    random_elem(rng, n).herm_decompose().0
}

pub fn random_invertible(rng: &mut Rng, n: usize) -> AlgElem {
    loop {
        let g = random_elem(rng, n);
        if inverse_condition(g.matrix()) > 1e-3 {
            return g;
        }
    }
}

/// Haar-distributed unitary via QR of a Gaussian matrix with phase correction.
pub fn random_unitary(rng: &mut Rng, n: usize) -> AlgElem {
    let g = random_invertible(rng, n);
    let qr = g.0.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases: Vec<Complex64> = (0..n)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect();
    AlgElem(CMatrix::from_fn(n, n, |i, j| q[(i, j)] * phases[j]))
}

/// A positive semidefinite element `c c*` with Gaussian `c`.
pub fn random_psd(rng: &mut Rng, n: usize) -> AlgElem {
    let c = random_elem(rng, n);
    &c * &c.adjoint()
}

/// A density matrix: positive semidefinite with trace one.
pub fn random_density(rng: &mut Rng, n: usize) -> AlgElem {
    let p = random_psd(rng, n);
    let t = p.trace_normalized().re;
    p.scale_real(1.0 / t)
}

pub fn random_unit_vector(rng: &mut Rng, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| random::complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng_from_seed;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn adjoint_fixes_identity() {
        assert_eq!(AlgElem::identity(3).adjoint(), AlgElem::identity(3));
    }

    #[test]
    fn herm_decompose_of_i_times_identity() {
        let (h, k) = AlgElem::scalar(2, I).herm_decompose();
        assert!(h.approx_eq(&AlgElem::zeros(2)));
        assert!(k.approx_eq(&AlgElem::identity(2)));
    }

    #[test]
    fn herm_decompose_upper_triangular() {
        // a = [[1, i], [0, 1]]: h = (a + a*)/2 = [[1, i/2], [-i/2, 1]]
        let a = AlgElem::new(CMatrix::from_row_slice(2, 2, &[c(1., 0.), I, c(0., 0.), c(1., 0.)])).unwrap();
        let (h, k) = a.herm_decompose();
        let h_expected =
            AlgElem::new(CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.5), c(0., -0.5), c(1., 0.)])).unwrap();
        assert!(h.approx_eq(&h_expected));
        assert!(h.is_hermitian() && k.is_hermitian());
        let skew = &a - &h;
        assert!(skew.adjoint().approx_eq(&-&skew));
        assert!((&h + &k.scale(I)).approx_eq(&a));
    }

    #[test]
    fn mul_dimension_mismatch() {
        let e = AlgElem::identity(2).mul(&AlgElem::identity(3));
        assert_eq!(e, Err(Error::DimensionMismatch { expected: 2, got: 3 }));
    }

    #[test]
    fn psd_examples() {
        assert!(AlgElem::zeros(3).is_psd());
        assert!(!AlgElem::from_real_diagonal(&[1.0, -1.0]).is_psd());
        let mut rng = rng_from_seed(1);
        for n in 1..5 {
            let a = random_elem(&mut rng, n);
            assert!((&a.adjoint() * &a).is_psd());
        }
        // non-Hermitian input is not symmetrised
        let a = AlgElem::new(CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)])).unwrap();
        assert!(!a.is_psd());
    }

    #[test]
    fn leq_is_psd_of_difference() {
        let a = AlgElem::from_real_diagonal(&[0.0, 1.0]);
        let b = AlgElem::from_real_diagonal(&[1.0, 1.0]);
        assert!(a.leq(&b));
        assert!(!b.leq(&a));
    }

    #[test]
    fn unitary_and_invertible_examples() {
        assert!(AlgElem::identity(4).is_unitary());
        for theta in [0.0, 0.3, 1.7, -2.9] {
            let u = AlgElem::from_diagonal(&[Complex64::from_polar(1.0, theta), c(1., 0.)]);
            assert!(u.is_unitary());
        }
        let p = AlgElem::from_real_diagonal(&[1.0, 0.0]);
        assert!(!p.is_invertible());
        assert_eq!(p.inverse(), Err(Error::Singular));
        let mut rng = rng_from_seed(3);
        assert!(random_unitary(&mut rng, 5).is_unitary());
    }

    #[test]
    fn trace_examples() {
        let p = AlgElem::outer(&[c(1., 0.), c(0., 0.), c(0., 0.)]);
        assert!((p.trace_normalized() - c(1., 0.)).norm() < 1e-15);
        assert_eq!(AlgElem::identity(5).trace_normalized(), c(5., 0.));
        let mut rng = rng_from_seed(4);
        let (a, b) = (random_elem(&mut rng, 4), random_elem(&mut rng, 4));
        assert!(((&a * &b).trace_normalized() - (&b * &a).trace_normalized()).norm() < 1e-12);
    }

    #[test]
    fn homotope_examples() {
        let mut rng = rng_from_seed(5);
        let (a, b) = (random_elem(&mut rng, 3), random_elem(&mut rng, 3));
        let one = AlgElem::identity(3);
        assert!(homotope_assoc(&a, &one, &b).unwrap().approx_eq(&(&a * &b)));
        let hbar = 0.37;
        let u = AlgElem::scalar(3, I * hbar);
        assert!(homotope_lie(&a, &u, &a).unwrap().approx_eq(&AlgElem::zeros(3)));
        let (h1, h2, hu) = (
            random_hermitian(&mut rng, 3),
            random_hermitian(&mut rng, 3),
            random_hermitian(&mut rng, 3),
        );
        assert!(homotope_jordan(&h1, &hu, &h2).unwrap().is_hermitian());
    }

    #[test]
    fn pair_idempotents() {
        let one = AlgElem::identity(3);
        assert!(is_pair_idempotent(&PairElement { plus: one.clone(), minus: one }));
        let mut rng = rng_from_seed(6);
        let v = random_unit_vector(&mut rng, 3);
        let p = AlgElem::outer(&v);
        assert!(is_pair_idempotent(&PairElement { plus: p.clone(), minus: p }));
        let bad = AlgElem::scalar(3, c(2., 0.));
        assert!(!is_pair_idempotent(&PairElement { plus: bad.clone(), minus: bad }));
    }

    #[test]
    fn q_operator_matches_invertibility() {
        let mut rng = rng_from_seed(7);
        let x = random_invertible(&mut rng, 3);
        assert!(q_operator_invertible(&x));
        assert!(inverse_condition(&q_operator_matrix(&x)) > 1e-12);
        let p = AlgElem::from_real_diagonal(&[1.0, 0.0, 2.0]);
        assert!(!q_operator_invertible(&p));
        assert!(inverse_condition(&q_operator_matrix(&p)) < 1e-12);
    }
}
