//! The Hermitian projective line and the real unitary universe.
//!
//! `W = C^{2n}` carries the skew-Hermitian form `ω(u, v) = u₁*v₂ − u₂*v₁`
//! with matrix `Ω = [[0, I], [−I, 0]]`, and the complex structure
//! `J = [[0, −I], [I, 0]]`. Three commuting involutions act on points:
//! `τ` (ω-orthocomplement), `α` (orthocomplement for the standard inner
//! product) and `β = α∘τ` (the image under `J`).
//!
//! `R` is the set of `τ`-fixed points (ω-Lagrangians). The poles are the
//! `J`-eigenspaces `N = [iI; I]` and `S = [−iI; I]`, and `R_{N,S}` is the part
//! of `R` transversal to both. The Cayley matrix `C = [[iI, −iI], [I, I]]`
//! sends `0 ↦ N` and `∞ ↦ S` and identifies `R_{N,S}` with `U(n)`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::algebra::{numeric_rank, random_hermitian, random_unitary, try_inverse, AlgElem, CMatrix, I, TOL};
use crate::classical::RP1Value;
use crate::error::{Error, Result};
use crate::grassmann::{
    apply_map, is_transversal, point_from_chart, random_point, scalar_operator, torsor_product, Chart, ProjectiveMap,
    SubspacePoint,
};
use crate::random::{rng_from_seed, Rng};

const CHART_SEARCH_SEED: u64 = 0x6d61_7472_796f_7368;
const CHART_DRAWS: usize = 100;

fn block(tl: &CMatrix, tr: &CMatrix, bl: &CMatrix, br: &CMatrix) -> CMatrix {
    let n = tl.nrows();
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(tl);
    m.view_mut((0, n), (n, n)).copy_from(tr);
    m.view_mut((n, 0), (n, n)).copy_from(bl);
    m.view_mut((n, n), (n, n)).copy_from(br);
    m
}

fn scaled_identity(n: usize, c: Complex64) -> CMatrix {
    CMatrix::identity(n, n) * c
}

/// The form `ω` and the complex structure `J` on `C^{2n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormMatrix {
    pub omega: CMatrix,
    pub j: CMatrix,
}

impl FormMatrix {
    pub fn new(n: usize) -> Self {
        let one = CMatrix::identity(n, n);
        let zero = CMatrix::zeros(n, n);
        Self {
            omega: block(&zero, &one, &-&one, &zero),
            j: block(&zero, &-&one, &one, &zero),
        }
    }

    /// `ω(u, v) = u*·Ω·v`.
    pub fn form(&self, u: &CMatrix, v: &CMatrix) -> CMatrix {
        u.adjoint() * &self.omega * v
    }
}

/// The Cayley matrix `[[iI, −iI], [I, I]]`.
pub fn cayley_matrix(n: usize) -> CMatrix {
    let one = CMatrix::identity(n, n);
    block(&scaled_identity(n, I), &scaled_identity(n, -I), &one, &one)
}

pub fn cayley_map(n: usize) -> ProjectiveMap {
    ProjectiveMap::new(cayley_matrix(n)).expect("Cayley matrix is invertible")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Involution {
    Tau,
    Alpha,
    Beta,
}

impl FromStr for Involution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau" => Ok(Self::Tau),
            "alpha" => Ok(Self::Alpha),
            "beta" => Ok(Self::Beta),
            other => Err(Error::Parse(format!("unknown involution `{other}`"))),
        }
    }
}

/// Standard orthocomplement of the column span of a `2n × k` matrix with orthonormal columns.
fn orthocomplement_of(basis: &CMatrix) -> SubspacePoint {
    let dim = basis.nrows();
    let proj = AlgElem::new(basis * basis.adjoint()).expect("projector is square");
    let (_, vectors) = proj.hermitian_eigen();
    let keep = dim - basis.ncols();
    SubspacePoint::new(vectors.columns(0, keep).into_owned()).expect("eigenvectors are orthonormal")
}

pub fn alpha(x: &SubspacePoint) -> SubspacePoint {
    orthocomplement_of(x.basis())
}

/// `{v : ω(x, v) = 0}`, the orthocomplement of `Ω·x`.
pub fn tau(x: &SubspacePoint) -> SubspacePoint {
    let f = FormMatrix::new(x.dim());
    orthocomplement_of(&(&f.omega * x.basis()))
}

pub fn beta(x: &SubspacePoint) -> SubspacePoint {
    let f = FormMatrix::new(x.dim());
    SubspacePoint::new(&f.j * x.basis()).expect("J is invertible")
}

pub fn involution(x: &SubspacePoint, kind: Involution) -> SubspacePoint {
    match kind {
        Involution::Tau => tau(x),
        Involution::Alpha => alpha(x),
        Involution::Beta => beta(x),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    R,
    Rprime,
    Rns,
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" => Ok(Self::R),
            "Rprime" => Ok(Self::Rprime),
            "RNS" => Ok(Self::Rns),
            other => Err(Error::Parse(format!("unknown space `{other}` (expected R, Rprime or RNS)"))),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::R => "R",
            Self::Rprime => "Rprime",
            Self::Rns => "RNS",
        })
    }
}

/// `x` is ω-Lagrangian, i.e. `τ(x) = x`.
pub fn is_lagrangian(x: &SubspacePoint) -> bool {
    let f = FormMatrix::new(x.dim());
    f.form(x.basis(), x.basis()).norm() <= TOL.eq * (x.dim() as f64).sqrt()
}

pub fn membership(x: &SubspacePoint, space: Space) -> bool {
    if !is_lagrangian(x) {
        return false;
    }
    match space {
        Space::R => true,
        Space::Rprime => is_transversal(x, &beta(x)),
        Space::Rns => {
            let (north, south) = poles(x.dim());
            is_transversal(x, &north) && is_transversal(x, &south)
        }
    }
}

fn require_universe(x: &SubspacePoint) -> Result<()> {
    if membership(x, Space::Rns) {
        Ok(())
    } else {
        Err(Error::NotInUniverse)
    }
}

/// `(N, S) = ([iI; I], [−iI; I])`.
pub fn poles(n: usize) -> (SubspacePoint, SubspacePoint) {
    let one = CMatrix::identity(n, n);
    let mk = |c: Complex64| {
        let mut m = CMatrix::zeros(2 * n, n);
        m.view_mut((0, 0), (n, n)).copy_from(&scaled_identity(n, c));
        m.view_mut((n, 0), (n, n)).copy_from(&one);
        SubspacePoint::new(m).expect("pole has full rank")
    };
    (mk(I), mk(-I))
}

/// `λ_{N,S}` with `λ = e^{iθ}`: multiplication by `λ` on `N`, identity on `S`.
pub fn s1_action(theta: f64, x: &SubspacePoint) -> SubspacePoint {
    let (north, south) = poles(x.dim());
    let op = scalar_operator(Complex64::from_polar(1.0, theta), &north, &south).expect("poles are transversal");
    op.apply(x).expect("the operator is invertible")
}

pub fn cayley_to_unitary(x: &SubspacePoint) -> Result<AlgElem> {
    require_universe(x)?;
    let c_inv = cayley_map(x.dim()).inverse();
    let u = crate::grassmann::chart_repr(&apply_map(&c_inv, x)).map_err(|_| Error::NotInUniverse)?;
    if !u.is_unitary() {
        return Err(Error::NotUnitary);
    }
    Ok(u)
}

/// `span(C·[I; u]) = [i(I − u); I + u]`.
pub fn unitary_to_point(u: &AlgElem) -> Result<SubspacePoint> {
    if !u.is_unitary() {
        return Err(Error::NotUnitary);
    }
    Ok(apply_map(&cayley_map(u.dim()), &point_from_chart(u)))
}

/// `x ·_y z` on `R_{N,S}`; in the Cayley chart it reads `u_x u_y* u_z`.
pub fn unitary_torsor(x: &SubspacePoint, y: &SubspacePoint, z: &SubspacePoint) -> Result<SubspacePoint> {
    for p in [x, y, z] {
        require_universe(p)?;
    }
    let (north, south) = poles(x.dim());
    torsor_product(x, y, z, &south, &north)
}

/// The element `C·diag(p, q)·C⁻¹` of `U`, which fixes `N` and `S` and commutes with `J`.
pub fn unitary_symmetry(p: &AlgElem, q: &AlgElem) -> Result<ProjectiveMap> {
    if !p.is_unitary() || !q.is_unitary() {
        return Err(Error::NotUnitary);
    }
    let n = p.dim();
    let zero = CMatrix::zeros(n, n);
    let c = cayley_matrix(n);
    let c_inv = try_inverse(&c)?;
    ProjectiveMap::new(&c * block(p.matrix(), &zero, &zero, q.matrix()) * c_inv)
}

/// A symmetry `g ∈ U` with `g(a) = 0`: in the Cayley chart, left multiplication by `−u_a*`.
pub fn transport_to_origin(a: &SubspacePoint) -> Result<ProjectiveMap> {
    let u = cayley_to_unitary(a)?;
    unitary_symmetry(&AlgElem::identity(a.dim()), &u.adjoint().scale_real(-1.0))
}

/// The unit `i_{N,S}(a)` of the tangent algebra at `a`.
pub fn tangent_unit(a: &SubspacePoint) -> Result<SubspacePoint> {
    require_universe(a)?;
    Ok(s1_action(FRAC_PI_2, a))
}

/// Product of the associative algebra `U_{α(a)}` with zero `a` and unit `i_{N,S}(a)`.
pub fn tangent_product(a: &SubspacePoint, x: &SubspacePoint, y: &SubspacePoint) -> Result<SubspacePoint> {
    let g = transport_to_origin(a)?;
    let horizon = alpha(a);
    for p in [x, y] {
        if !is_transversal(p, &horizon) {
            return Err(Error::NotTransversal("factor must be transversal to alpha(base)".into()));
        }
    }
    let gx = crate::grassmann::chart_repr(&apply_map(&g, x))?;
    let gy = crate::grassmann::chart_repr(&apply_map(&g, y))?;
    Ok(apply_map(&g.inverse(), &point_from_chart(&gx.mul(&gy)?)))
}

/// The chart with horizon `c` and origin `α(c)`.
pub fn chart_at(c: &SubspacePoint) -> Result<Chart> {
    Chart::new(c, &alpha(c))
}

/// A chart whose horizon is transversal to both points: `∞`, `0`, then seeded random points.
pub fn common_chart(x: &SubspacePoint, y: &SubspacePoint) -> Result<Chart> {
    let n = x.dim();
    if y.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: y.dim() });
    }
    let fits = |c: &SubspacePoint| is_transversal(x, c) && is_transversal(y, c);
    let inf = SubspacePoint::infinity(n);
    if fits(&inf) {
        return Ok(Chart::standard(n));
    }
    let zero = SubspacePoint::zero(n);
    if fits(&zero) {
        return chart_at(&zero);
    }
    let mut rng = rng_from_seed(CHART_SEARCH_SEED);
    for _ in 0..CHART_DRAWS {
        let c = random_point(&mut rng, n)?;
        if fits(&c) {
            return chart_at(&c);
        }
    }
    Err(Error::NoCommonChart(CHART_DRAWS))
}

/// Rank of the chart difference `chart_c(x) − chart_c(y)` for a common chart `c`.
pub fn arithmetic_distance(x: &SubspacePoint, y: &SubspacePoint) -> Result<usize> {
    let chart = common_chart(x, y)?;
    arithmetic_distance_in(&chart, x, y)
}

pub fn arithmetic_distance_in(chart: &Chart, x: &SubspacePoint, y: &SubspacePoint) -> Result<usize> {
    let d = chart.coords(x)? - chart.coords(y)?;
    let scale = chart.coords(x)?.norm().max(chart.coords(y)?.norm()).max(1.0);
    if d.norm() <= TOL.eq * scale {
        return Ok(0);
    }
    Ok(numeric_rank(&d, TOL.rank))
}

pub fn is_rank_one_pair(x: &SubspacePoint, y: &SubspacePoint) -> Result<bool> {
    Ok(arithmetic_distance(x, y)? == 1)
}

/// The point `t·x + (1 − t)·y` of the intrinsic line through a rank-one pair.
///
/// `t = ∞` gives the point completing the affine line.
pub fn intrinsic_line_point(x: &SubspacePoint, y: &SubspacePoint, t: RP1Value) -> Result<SubspacePoint> {
    let chart = common_chart(x, y)?;
    intrinsic_line_point_in(&chart, x, y, t)
}

pub fn intrinsic_line_point_in(chart: &Chart, x: &SubspacePoint, y: &SubspacePoint, t: RP1Value) -> Result<SubspacePoint> {
    if arithmetic_distance_in(chart, x, y)? != 1 {
        return Err(Error::NotRankOne);
    }
    let (cx, cy) = (chart.coords(x)?, chart.coords(y)?);
    match t {
        RP1Value::Finite(t) => {
            let m = &cx * Complex64::new(t, 0.0) + &cy * Complex64::new(1.0 - t, 0.0);
            Ok(chart.point(&m))
        }
        RP1Value::Infinity => {
            // cx − cy = σ·u·v*: the graph of cy + t·σ·u·v* tends to {(p, cy·p) : v*p = 0} ⊕ (0, u).
            let n = chart.dim();
            let svd = (&cx - &cy).svd(true, true);
            let k = svd
                .singular_values
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .expect("nonempty");
            let u = svd.u.as_ref().expect("requested").column(k).into_owned();
            let v = svd.v_t.as_ref().expect("requested").row(k).adjoint();
            let along = AlgElem::new(&v * v.adjoint())?;
            let (_, vecs) = along.hermitian_eigen();
            let ps = vecs.columns(0, n - 1).into_owned();
            let mut pq = CMatrix::zeros(2 * n, n);
            pq.view_mut((0, 0), (n, n - 1)).copy_from(&ps);
            pq.view_mut((n, 0), (n, n - 1)).copy_from(&(&cy * &ps));
            pq.view_mut((n, n - 1), (n, 1)).copy_from(&u);
            chart.point_from_frame(&pq)
        }
    }
}

/// Coordinates in the chart at horizon `c` whose frame `[O | H]` satisfies `ω(O, H) = I`.
///
/// Chart changes between such frames act on coordinate differences by congruence,
/// so the positive cone in `U_c` does not depend on the origin.
fn oriented_coords(c: &SubspacePoint, points: [&SubspacePoint; 2]) -> Result<[CMatrix; 2]> {
    let n = c.dim();
    let f = FormMatrix::new(n);
    let origin = alpha(c);
    let o = origin.basis();
    let h = c.basis() * try_inverse(&f.form(o, c.basis()))?;
    let mut frame = CMatrix::zeros(2 * n, 2 * n);
    frame.view_mut((0, 0), (2 * n, n)).copy_from(o);
    frame.view_mut((0, n), (2 * n, n)).copy_from(&h);
    let inv = try_inverse(&frame)?;
    let coords = |y: &SubspacePoint| -> Result<CMatrix> {
        let pq = &inv * y.basis();
        Ok(pq.rows(n, n).into_owned() * try_inverse(&pq.rows(0, n).into_owned())?)
    };
    Ok([coords(points[0])?, coords(points[1])?])
}

/// `(a, b, c)` is cyclically ordered: `a ≤ b` in the ordered vector space `U_c`.
///
/// When `a` or `b` is not transversal to `c`, the rotated triples `(b, c, a)` and
/// `(c, a, b)` are tried in turn.
pub fn cyclic_triple(a: &SubspacePoint, b: &SubspacePoint, c: &SubspacePoint) -> Result<bool> {
    let rotations = [(a, b, c), (b, c, a), (c, a, b)];
    for (lo, hi, horizon) in rotations {
        if is_transversal(lo, horizon) && is_transversal(hi, horizon) {
            let [l, h] = oriented_coords(horizon, [lo, hi])?;
            let d = AlgElem::new(h - l)?;
            if !d.is_hermitian() {
                return Err(Error::NotHermitian);
            }
            return Ok(d.is_psd());
        }
    }
    Err(Error::NotTransversal("no point of the triple is transversal to the other two".into()))
}

/// A point of `R_{N,S}`, drawn as the Cayley image of a Haar unitary.
pub fn random_universe_point(rng: &mut Rng, n: usize) -> SubspacePoint {
    unitary_to_point(&random_unitary(rng, n)).expect("Haar sample is unitary")
}

/// `exp(s·X)` for `X = [[a, b], [c, −a*]]` with `b, c` Hermitian, an element of `Aut(ω)`.
pub fn random_form_automorphism(rng: &mut Rng, n: usize, scale: f64) -> ProjectiveMap {
    let a = crate::algebra::random_elem(rng, n);
    let b = random_hermitian(rng, n);
    let c = random_hermitian(rng, n);
    let x = block(a.matrix(), b.matrix(), c.matrix(), &-a.adjoint().into_matrix());
    ProjectiveMap::new((x * Complex64::new(scale, 0.0)).exp()).expect("exponential is invertible")
}

/// A Haar-random element `C·diag(p, q)·C⁻¹` of `U`.
pub fn random_unitary_symmetry(rng: &mut Rng, n: usize) -> ProjectiveMap {
    let p = random_unitary(rng, n);
    let q = random_unitary(rng, n);
    unitary_symmetry(&p, &q).expect("Haar samples are unitary")
}

/// `g*·Ω·g = Ω`.
pub fn preserves_form(g: &ProjectiveMap) -> bool {
    let f = FormMatrix::new(g.dim());
    crate::algebra::matrices_close(&f.form(g.rep(), g.rep()), &f.omega, 1e-8)
}
