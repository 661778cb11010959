//! Projective geometry of the matrix *-algebra `M(n, C)`.
//!
//! The projective line over `A = M(n, C)` is realised as the Grassmannian of
//! `n`-dimensional subspaces of `C^{2n}`. On top of it the crate builds:
//!
//! - [`algebra`]: the *-algebra itself (order, trace, homotopes, associative pairs);
//! - [`grassmann`]: points, transversality, projectors, torsor laws and the `GL(2n)` action;
//! - [`crossratio`]: operator-valued and scalar cross-ratios, classical cross-ratio and ratio;
//! - [`hermitian`]: involutions `τ, α, β`, the Hermitian line, poles, the Cayley transform,
//!   the unitary torsor, tangent algebras, arithmetic distance and cyclic order;
//! - [`obstate`]: obstates and their expectation values, variance and spectral distribution;
//! - [`classical`]: the commutative model on a finite set (cyclic order, pairings, densities);
//! - [`exact`]: an exact Gaussian-rational backend for the algebraic identities;
//! - [`sweep`] and [`cli`]: the seeded property harness and the command-line front end.

pub mod algebra;
pub mod classical;
pub mod cli;
pub mod crossratio;
pub mod error;
pub mod exact;
pub mod grassmann;
pub mod hermitian;
pub mod io;
pub mod obstate;
pub mod random;
pub mod sweep;

pub use algebra::{AlgElem, PairElement, Tolerances, TOL};
pub use classical::{Bijection, ClassicalFn, Extended, Measure, RP1Value};
pub use crossratio::EndoX;
pub use error::{Error, Result};
pub use grassmann::{EndoW, ProjectiveMap, SubspacePoint};
pub use obstate::Obstate;
