use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("constant term is not a unit")]
    NonUnitConstant,

    #[error("inner series has a nonzero constant term")]
    NonZeroConstant,

    #[error("linear coefficient is not a unit")]
    NonUnitLinear,

    #[error("degree {requested} exceeds available order {available}")]
    OrderOverflow { requested: usize, available: usize },

    #[error("order {requested} outside supported range {min}..={max}")]
    OrderGuard { requested: usize, min: usize, max: usize },

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("pole at q=1")]
    Pole,

    #[error("q on the branch cut [0,+inf)")]
    CutViolation,

    #[error("tau on the segment [0,1]")]
    OnSegment,

    #[error("non-finite complex input")]
    NonFinite,

    #[error("outside certified range: {0}")]
    OutOfRange(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
