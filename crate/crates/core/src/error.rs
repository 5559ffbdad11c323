//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by semigroup, semicharacter and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid semigroup description: {0}")]
    InvalidSemigroup(String),

    #[error("membership of {vector:?} could not be resolved within search bound {bound}")]
    UnresolvedMembership { vector: Vec<i64>, bound: usize },

    #[error("element {0:?} is not a member of the semigroup")]
    ElementNotInSemigroup(Vec<i64>),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid semicharacter: {0}")]
    InvalidSemicharacter(String),

    #[error("invalid exponent {re}+{im}i: {reason}")]
    InvalidExponent { re: f64, im: f64, reason: String },

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("boundary spectrum leaks outside the semigroup at frequencies {0:?}")]
    SpectrumLeakage(Vec<Vec<i64>>),

    #[error("function is not strictly contractive: sup |F| = {0} >= 1")]
    NotStrictlyContractive(f64),

    #[error("continuous logarithm obstructed: {0}")]
    WindingObstruction(String),

    #[error("curve is not complex-tangential: defect {defect:e} at t = {t} exceeds {tol:e}")]
    NotComplexTangential { t: f64, defect: f64, tol: f64 },

    #[error("cover verification failed: {0}")]
    CoverVerificationFailed(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
