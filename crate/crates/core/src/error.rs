use thiserror::Error;

use crate::rational::Q;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported type label `{0}`")]
    UnsupportedType(String),

    #[error("Weyl group enumeration exceeded the cap of {cap} elements")]
    WeylCapExceeded { cap: usize },

    #[error("structure constant sign consistency failed: {0}")]
    SignConsistency(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("central charge {value} is excluded for the order-{order} trace formula")]
    ExcludedCentralCharge { value: Q, order: usize },

    #[error("unsupported trace order {0} (expected 2, 3 or 4)")]
    UnsupportedOrder(usize),

    #[error("cannot invert a series whose lowest coefficient is unknown or zero")]
    SeriesInversion,

    #[error("series has non-integral exponent {0}; this indicates a convention error")]
    ExponentIntegrality(Q),

    #[error("series check failed: {0}")]
    SeriesCheck(String),

    #[error("truncation order {truncation} is too short to certify class degree 2")]
    TruncationTooShort { truncation: Q },

    #[error("non-integral average {value} in invariant dimension at degree {degree}")]
    NonIntegralAverage { value: Q, degree: usize },

    #[error("unsupported lattice/subgroup combination: {0}")]
    UnsupportedLattice(String),

    #[error("{what} exceeds the cap of {cap}")]
    CapExceeded { what: String, cap: usize },

    #[error(
        "Virasoro Gram matrix at degree {degree} is singular at c = {c}; degenerate central charges up to this degree: {degenerate}"
    )]
    SingularVirasoro { degree: usize, c: Q, degenerate: String },

    #[error("inconsistent linear system: {0}")]
    InconsistentSystem(String),

    #[error("state has degree {found}, expected {expected}")]
    WrongDegree { expected: usize, found: usize },

    #[error("could not parse `{0}` as a rational number")]
    ParseRational(String),

    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
