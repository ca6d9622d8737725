use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("outside validity domain: n = {n} is below {min}")]
    OutsideValidity { n: i64, min: i64 },

    #[error("weight mismatch: representation of weight {rep} against class of weight {class}")]
    WeightMismatch { rep: usize, class: usize },

    #[error("index {value} out of range 1..={n}")]
    IndexOutOfRange { value: usize, n: usize },

    #[error("malformed query: {0}")]
    MalformedQuery(String),

    #[error("matrix size must be at least 1")]
    InvalidSize,

    #[error(
        "stabilizer sum has {0} terms (limit 10^8); estimate this moment at fixed n with Monte Carlo instead"
    )]
    TooExpensive(u128),

    #[error("degree {0} exceeds the supported maximum of {max}", max = crate::combinat::MAX_DEGREE)]
    DegreeTooLarge(usize),

    #[error("unknown diagram id {0:?}")]
    UnknownDiagram(String),

    #[error("x0 constraints violated")]
    XConstraint,

    #[error("more coordinates than dimensions")]
    TooManyCoordinates,

    #[error("unknown relation {0:?}")]
    UnknownRelation(String),

    #[error("no closed form; use method=group")]
    NoClosedForm,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
