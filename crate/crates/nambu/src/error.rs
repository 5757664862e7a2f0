//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by exact-arithmetic operations and algebra constructors.
///
/// Failed mathematical identities are never errors; they are reported as
/// violation data by the checkers. An `Error` means the requested operation
/// itself was ill-posed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("series shape mismatch: arity/order ({0}, {1}) vs ({2}, {3})")]
    SeriesShapeMismatch(usize, u32, usize, u32),
    #[error("series has zero constant term and is not invertible")]
    NonInvertibleSeries,
    #[error("negative exponent on variable {0} which is not flagged invertible")]
    LaurentNotAllowed(usize),
    #[error("substitution requires a polynomial without negative exponents")]
    LaurentInSubstitution,
    #[error("element does not live on the algebra carrier: {0}")]
    CarrierMismatch(String),
    #[error("map {0} failed the endomorphism sample check ({1} violations)")]
    NotAnEndomorphism(String, usize),
    #[error("twisting maps must act on the algebra carrier: {0}")]
    TwistCarrierMismatch(String),
    #[error("exact rotation entries must satisfy c^2 + s^2 = 1 (got c={0}, s={1})")]
    NotOnUnitCircle(String, String),
    #[error("gamma map is not unimodular: det J = {0}")]
    NotUnimodular(String),
    #[error("k1*k2*k3 must be 1 (got {0})")]
    BadDiagonal(String),
    #[error("q must be invertible in its coefficient ring")]
    NonInvertibleQ,
    #[error("z = {0} does not make the ternary Virasoro-Witt bracket Nambu-Lie; pass the override to deform anyway")]
    BaseNotNambuLie(String),
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("deformation file format error at line {0}: {1}")]
    FileFormat(usize, String),
}

pub type Result<T> = std::result::Result<T, Error>;
