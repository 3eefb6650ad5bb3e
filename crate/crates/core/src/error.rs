use thiserror::Error;

/// Errors raised by the algebraic routines in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero undefined")]
    ValuationOfZero,
    #[error("zero input: {0}")]
    ZeroInput(&'static str),
    #[error("inconsistent congruences: {0}")]
    InconsistentCongruences(String),
    #[error("elements belong to different quaternion algebras")]
    ParentMismatch,
    #[error("non-invertible element")]
    NonInvertible,
    #[error("element has nonzero trace {0}")]
    NonzeroTrace(String),
    #[error("invalid algebra parameters: {0}")]
    InvalidAlgebra(String),
    #[error("totally indefinite required")]
    NotIndefinite,
    #[error("not a splitting field")]
    NotSplittingField,
    #[error("delta mismatch: embedding squares to {found}, algebra uses {expected}")]
    DeltaMismatch { expected: String, found: String },
    #[error("not an idempotent: {0}")]
    NotIdempotent(String),
    #[error("invalid field parameter: {0}")]
    InvalidField(String),
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("element does not generate the requested field: {0}")]
    FieldMismatch(String),
    #[error("discriminant mismatch: {0} vs {1}")]
    DiscriminantMismatch(i64, i64),
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("{0} does not divide {1}")]
    NotADivisor(i64, i64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
