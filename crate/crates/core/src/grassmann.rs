//! Points of the projective line `A P¹` over `A = M(n, C)`.
//!
//! A point is an `n`-dimensional subspace of `W = C^{2n} = A²`, stored as an
//! orthonormal `2n × n` basis. Two stored bases describe the same point iff
//! their orthogonal projectors agree; [`PartialEq`] compares projectors.
//!
//! Coordinates follow the graph convention: [`point_from_chart`] sends `a` to
//! the column span of `[I; a]`, so `0 = [I; 0]`, `∞ = [0; I]`, `1 = [I; I]`.
//! The dual chart [`point_from_dual_chart`] sends `w` to the span of `[w; I]`,
//! which is the embedding `z ↦ [(z, 1)]` on the other affine part `U_0`.
//!
//! Projectors are always written `projector(image, kernel)`. The classical
//! notation `P^a_x` (kernel `a`, image `x`) is `projector(x, a)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{inverse_condition, matrices_close, try_inverse, AlgElem, CMatrix, TOL};
use crate::error::{Error, Result};
use crate::random::{self, Rng};

const MAX_RESAMPLES: usize = 100;

fn stack(top: &CMatrix, bottom: &CMatrix) -> CMatrix {
    let (n, k) = top.shape();
    let mut m = CMatrix::zeros(n + bottom.nrows(), k);
    m.view_mut((0, 0), (n, k)).copy_from(top);
    m.view_mut((n, 0), (bottom.nrows(), k)).copy_from(bottom);
    m
}

fn side_by_side(left: &CMatrix, right: &CMatrix) -> CMatrix {
    let (r, k) = left.shape();
    let mut m = CMatrix::zeros(r, k + right.ncols());
    m.view_mut((0, 0), (r, k)).copy_from(left);
    m.view_mut((0, k), (r, right.ncols())).copy_from(right);
    m
}

/// A point of `Gras_n(C^{2n})`.
#[derive(Debug, Clone)]
pub struct SubspacePoint {
    basis: CMatrix,
}

impl SubspacePoint {
    /// Canonicalises any full-rank `2n × n` matrix to an orthonormal basis of its span.
    pub fn new(basis: CMatrix) -> Result<Self> {
        let (rows, cols) = basis.shape();
        if cols == 0 || rows != 2 * cols {
            return Err(Error::DimensionMismatch {
                expected: 2 * cols,
                got: rows,
            });
        }
        if inverse_condition(&basis) <= TOL.inv {
            return Err(Error::RankDeficient);
        }
        let q = basis.qr().q();
        Ok(Self { basis: q })
    }

    /// `0 = [(1, 0)]`, the span of `[I; 0]`.
    pub fn zero(n: usize) -> Self {
        point_from_chart(&AlgElem::zeros(n))
    }

    /// `∞ = [(0, 1)]`, the span of `[0; I]`.
    pub fn infinity(n: usize) -> Self {
        Self::new(stack(&CMatrix::zeros(n, n), &CMatrix::identity(n, n))).expect("infinity has full rank")
    }

    /// `1 = [(1, 1)]`, the diagonal.
    pub fn one(n: usize) -> Self {
        point_from_chart(&AlgElem::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Orthogonal projector onto the span.
    pub fn orthogonal_projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// Frobenius distance between orthogonal projectors.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (self.orthogonal_projector() - other.orthogonal_projector()).norm()
    }

    pub fn approx_eq_tol(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

impl PartialEq for SubspacePoint {
    /// Tolerance-based: `‖Π_x − Π_y‖_F ≤ tol_eq`.
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq_tol(other, TOL.eq)
    }
}

fn check_same_dim(x: &SubspacePoint, y: &SubspacePoint) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    Ok(())
}

/// The graph `{(v, av)}` of `a`, i.e. the span of `[I; a]`.
pub fn point_from_chart(a: &AlgElem) -> SubspacePoint {
    let n = a.dim();
    SubspacePoint::new(stack(&CMatrix::identity(n, n), a.matrix())).expect("graph has full rank")
}

/// Left inverse of [`point_from_chart`]: `X₂ X₁⁻¹` for a basis `[X₁; X₂]`.
pub fn chart_repr(x: &SubspacePoint) -> Result<AlgElem> {
    let n = x.dim();
    if !is_transversal(x, &SubspacePoint::infinity(n)) {
        return Err(Error::NotInChart);
    }
    let top = x.basis.rows(0, n).into_owned();
    let bottom = x.basis.rows(n, n).into_owned();
    let inv = try_inverse(&top).map_err(|_| Error::NotInChart)?;
    AlgElem::new(bottom * inv)
}

/// The span of `[w; I]`: the embedding `z ↦ [(z, 1)]` into the affine part `U_0`.
pub fn point_from_dual_chart(w: &AlgElem) -> SubspacePoint {
    let n = w.dim();
    SubspacePoint::new(stack(w.matrix(), &CMatrix::identity(n, n))).expect("dual graph has full rank")
}

/// Left inverse of [`point_from_dual_chart`]: `X₁ X₂⁻¹`.
pub fn dual_chart_repr(x: &SubspacePoint) -> Result<AlgElem> {
    let n = x.dim();
    if !is_transversal(x, &SubspacePoint::zero(n)) {
        return Err(Error::NotInChart);
    }
    let top = x.basis.rows(0, n).into_owned();
    let bottom = x.basis.rows(n, n).into_owned();
    let inv = try_inverse(&bottom).map_err(|_| Error::NotInChart)?;
    AlgElem::new(top * inv)
}

/// Outcome of a transversality test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transversality {
    pub transversal: bool,
    /// `σ_min / σ_max` of `[basis(x) | basis(a)]`.
    pub margin: f64,
    /// Set when the margin is within two orders of magnitude of the threshold.
    pub near_threshold: bool,
}

pub fn transversality(x: &SubspacePoint, a: &SubspacePoint) -> Transversality {
    if x.dim() != a.dim() {
        return Transversality {
            transversal: false,
            margin: 0.0,
            near_threshold: false,
        };
    }
    let margin = inverse_condition(&side_by_side(&x.basis, &a.basis));
    Transversality {
        transversal: margin > TOL.transversal,
        margin,
        near_threshold: margin > TOL.transversal * 1e-2 && margin < TOL.transversal * 1e2,
    }
}

/// `W = x ⊕ a`.
pub fn is_transversal(x: &SubspacePoint, a: &SubspacePoint) -> bool {
    transversality(x, a).transversal
}

fn require_transversal(x: &SubspacePoint, a: &SubspacePoint, what: &str) -> Result<()> {
    if is_transversal(x, a) {
        Ok(())
    } else {
        Err(Error::NotTransversal(what.to_string()))
    }
}

/// A linear endomorphism of `W = C^{2n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EndoW {
    pub matrix: CMatrix,
}

impl EndoW {
    pub fn identity(n: usize) -> Self {
        Self {
            matrix: CMatrix::identity(2 * n, 2 * n),
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        matrices_close(&self.matrix, &other.matrix, TOL.eq)
    }

    /// Image of a point; fails if the image is not `n`-dimensional.
    pub fn apply(&self, x: &SubspacePoint) -> Result<SubspacePoint> {
        SubspacePoint::new(&self.matrix * &x.basis)
    }
}

/// The projector with the given image and kernel, `[X|A]·diag(I, 0)·[X|A]⁻¹`.
pub fn projector(image: &SubspacePoint, kernel: &SubspacePoint) -> Result<EndoW> {
    check_same_dim(image, kernel)?;
    require_transversal(image, kernel, "projector image and kernel")?;
    let n = image.dim();
    let frame = side_by_side(&image.basis, &kernel.basis);
    let inv = try_inverse(&frame)?;
    let mut d = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        d[(i, i)] = Complex64::new(1.0, 0.0);
    }
    Ok(EndoW {
        matrix: frame * d * inv,
    })
}

/// `M_{xabz} = P^a_x − P^z_b`, i.e. `projector(x, a) − projector(b, z)`.
pub fn m_operator(x: &SubspacePoint, a: &SubspacePoint, b: &SubspacePoint, z: &SubspacePoint) -> Result<EndoW> {
    for (p, name) in [(x, "x"), (z, "z")] {
        require_transversal(p, a, &format!("{name} must be transversal to a"))?;
        require_transversal(p, b, &format!("{name} must be transversal to b"))?;
    }
    let p1 = projector(x, a)?;
    let p2 = projector(b, z)?;
    Ok(EndoW {
        matrix: p1.matrix - p2.matrix,
    })
}

/// The group law `x ·_y z = M_{xabz}(y)` on `U_a ∩ U_b`.
pub fn torsor_product(
    x: &SubspacePoint,
    y: &SubspacePoint,
    z: &SubspacePoint,
    a: &SubspacePoint,
    b: &SubspacePoint,
) -> Result<SubspacePoint> {
    require_transversal(y, a, "y must be transversal to a")?;
    require_transversal(y, b, "y must be transversal to b")?;
    m_operator(x, a, b, z)?.apply(y)
}

/// Multiplication by `r` in the vector space `(U_a, x)`.
pub fn scalar_action(r: Complex64, a: &SubspacePoint, x: &SubspacePoint, y: &SubspacePoint) -> Result<SubspacePoint> {
    require_transversal(y, a, "y must be transversal to a")?;
    scalar_operator(r, a, x)?.apply(y)
}

/// The operator acting as `r` on `a` and as the identity on `x`.
///
/// In the standard chart with `(a, x) = (∞, 0)` it sends `[I; c]` to `[I; r·c]`.
pub fn scalar_operator(r: Complex64, a: &SubspacePoint, x: &SubspacePoint) -> Result<EndoW> {
    let on_a = projector(a, x)?;
    let on_x = projector(x, a)?;
    Ok(EndoW {
        matrix: on_a.matrix * r + on_x.matrix,
    })
}

/// An affine chart of `U_horizon` with a chosen origin.
///
/// A point `y ⊤ horizon` is the graph of a unique linear map `origin → horizon`
/// with respect to `W = origin ⊕ horizon`; its coordinate matrix expresses that
/// map in the stored bases. The standard chart (`horizon = ∞`, `origin = 0`)
/// reproduces [`chart_repr`].
#[derive(Debug, Clone)]
pub struct Chart {
    horizon: SubspacePoint,
    origin: SubspacePoint,
    frame_inv: CMatrix,
    frame: CMatrix,
}

impl Chart {
    pub fn new(horizon: &SubspacePoint, origin: &SubspacePoint) -> Result<Self> {
        check_same_dim(horizon, origin)?;
        require_transversal(origin, horizon, "chart origin and horizon")?;
        let frame = side_by_side(&origin.basis, &horizon.basis);
        let frame_inv = try_inverse(&frame)?;
        Ok(Self {
            horizon: horizon.clone(),
            origin: origin.clone(),
            frame_inv,
            frame,
        })
    }

    /// `horizon = ∞`, `origin = 0`: coordinates `X₂X₁⁻¹`.
    pub fn standard(n: usize) -> Self {
        let zero = CMatrix::zeros(n, n);
        let one = CMatrix::identity(n, n);
        let horizon = SubspacePoint::infinity(n);
        let origin = SubspacePoint::zero(n);
        let frame = stack(&side_by_side(&one, &zero), &side_by_side(&zero, &one));
        Self {
            horizon,
            origin,
            frame_inv: frame.clone(),
            frame,
        }
    }

    pub fn horizon(&self) -> &SubspacePoint {
        &self.horizon
    }

    pub fn origin(&self) -> &SubspacePoint {
        &self.origin
    }

    pub fn dim(&self) -> usize {
        self.origin.dim()
    }

    /// Solves `[O | H]·[p; q] = Y` and returns `q p⁻¹`.
    pub fn coords(&self, y: &SubspacePoint) -> Result<CMatrix> {
        check_same_dim(y, &self.origin)?;
        require_transversal(y, &self.horizon, "point must be transversal to the chart horizon")?;
        let n = self.dim();
        let pq = &self.frame_inv * &y.basis;
        let p = pq.rows(0, n).into_owned();
        let q = pq.rows(n, n).into_owned();
        Ok(q * try_inverse(&p)?)
    }

    /// The point with coordinate matrix `m`, spanned by `O + H·m`.
    pub fn point(&self, m: &CMatrix) -> SubspacePoint {
        SubspacePoint::new(self.lift(m)).expect("chart image has full rank")
    }

    /// Point spanned by the coordinate-frame vectors `[p; q]` (not necessarily a graph).
    pub(crate) fn point_from_frame(&self, pq: &CMatrix) -> Result<SubspacePoint> {
        SubspacePoint::new(&self.frame * pq)
    }

    /// The unnormalised basis `O + H·m` of the point with coordinates `m`.
    pub(crate) fn lift(&self, m: &CMatrix) -> CMatrix {
        let n = self.dim();
        &self.frame * stack(&CMatrix::identity(n, n), m)
    }
}

/// An element of `PGL(2n, C)`, acting on points by `x ↦ span(g·basis(x))`.
#[derive(Debug, Clone)]
pub struct ProjectiveMap {
    rep: CMatrix,
}

impl ProjectiveMap {
    pub fn new(rep: CMatrix) -> Result<Self> {
        let (r, c) = rep.shape();
        if r != c || r % 2 != 0 || r == 0 {
            return Err(Error::DimensionMismatch { expected: r, got: c });
        }
        if inverse_condition(&rep) <= TOL.inv {
            return Err(Error::Singular);
        }
        Ok(Self { rep })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rep: CMatrix::identity(2 * n, 2 * n),
        }
    }

    /// The block matrix `[[a, b], [c, d]]` acting on column vectors `(v₁; v₂)`.
    ///
    /// On the dual chart this is `z ↦ (az + b)(cz + d)⁻¹`; on the standard chart
    /// it is `z ↦ (c + dz)(a + bz)⁻¹`.
    pub fn from_blocks(a: &AlgElem, b: &AlgElem, c: &AlgElem, d: &AlgElem) -> Result<Self> {
        let top = side_by_side(a.matrix(), b.matrix());
        let bottom = side_by_side(c.matrix(), d.matrix());
        Self::new(stack(&top, &bottom))
    }

    /// The map acting on the standard chart by `z ↦ (az + b)(cz + d)⁻¹`.
    pub fn fractional_linear(a: &AlgElem, b: &AlgElem, c: &AlgElem, d: &AlgElem) -> Result<Self> {
        Self::from_blocks(d, c, b, a)
    }

    pub fn dim(&self) -> usize {
        self.rep.nrows() / 2
    }

    pub fn rep(&self) -> &CMatrix {
        &self.rep
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            rep: &self.rep * &other.rep,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            rep: try_inverse(&self.rep).expect("projective map is invertible"),
        }
    }

    pub fn as_endo(&self) -> EndoW {
        EndoW { matrix: self.rep.clone() }
    }
}

pub fn apply_map(g: &ProjectiveMap, x: &SubspacePoint) -> SubspacePoint {
    SubspacePoint::new(&g.rep * &x.basis).expect("invertible map preserves rank")
}

/// A point spanned by a complex Gaussian `2n × n` matrix.
pub fn random_point(rng: &mut Rng, n: usize) -> Result<SubspacePoint> {
    for _ in 0..MAX_RESAMPLES {
        if let Ok(p) = SubspacePoint::new(random::complex_gaussian_matrix(rng, 2 * n, n)) {
            return Ok(p);
        }
    }
    Err(Error::ResamplingExhausted(MAX_RESAMPLES))
}

pub fn random_point_seeded(seed: u64, n: usize) -> Result<SubspacePoint> {
    random_point(&mut random::rng_from_seed(seed), n)
}

/// A Gaussian `2n × 2n` matrix, redrawn until comfortably invertible.
pub fn random_map(rng: &mut Rng, n: usize) -> Result<ProjectiveMap> {
    for _ in 0..MAX_RESAMPLES {
        let m: DMatrix<Complex64> = random::complex_gaussian_matrix(rng, 2 * n, 2 * n);
        if inverse_condition(&m) > 1e-4 {
            return ProjectiveMap::new(m);
        }
    }
    Err(Error::ResamplingExhausted(MAX_RESAMPLES))
}

pub fn random_map_seeded(seed: u64, n: usize) -> Result<ProjectiveMap> {
    random_map(&mut random::rng_from_seed(seed), n)
}
