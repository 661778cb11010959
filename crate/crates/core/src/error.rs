use thiserror::Error;

/// Errors raised by the geometric and algebraic operations of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation requires n = 1, got n = {0}")]
    Dimension(usize),

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not unitary")]
    NotUnitary,

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("basis does not have full rank")]
    RankDeficient,

    #[error("point is not transversal to infinity, no standard chart coordinate")]
    NotInChart,

    #[error("points are not transversal: {0}")]
    NotTransversal(String),

    #[error("point is not in the real unitary universe")]
    NotInUniverse,

    #[error("no common transversal chart found after {0} draws")]
    NoCommonChart(usize),

    #[error("pair is not of arithmetic distance 1")]
    NotRankOne,

    #[error("resampling exhausted after {0} rejections")]
    ResamplingExhausted(usize),

    #[error("cross-ratio is indeterminate (0/0)")]
    Indeterminate,

    #[error("degenerate arguments: {0}")]
    Degenerate(String),

    #[error("degenerate reference values at index {0}")]
    DegenerateReference(usize),

    #[error("measure has zero weight at index {0}")]
    ZeroWeight(usize),

    #[error("obstate violates transversality clause: {0}")]
    Transversality(String),

    #[error("obstate violates membership clause: {0}")]
    Membership(String),

    #[error("strong obstate requires W_inf = alpha(A0)")]
    NotAntipodal,

    #[error("operation requires a strong obstate")]
    NotStrong,

    #[error("state is not pure")]
    NotPure,

    #[error("completion point on the intrinsic line is not unique")]
    NonUniqueCompletion,

    #[error("invalid input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
