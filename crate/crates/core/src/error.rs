use thiserror::Error;

/// Errors produced by the computations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },

    #[error("polynomial is not monic-reducible in variable {var}: {reason}")]
    NotMonicReducible { var: usize, reason: String },

    #[error("matrix {index} is not Hermitian")]
    NotHermitian { index: usize },

    #[error("invalid tube base: {0}")]
    InvalidTube(String),

    #[error("sampling exhausted: {0}")]
    SamplingExhausted(String),

    #[error("bracket [{i}, {j}] leaves the span of the basis")]
    NotClosed { i: usize, j: usize },

    #[error("the Euler field is not in the span of the algebra")]
    EulerMissing,

    #[error("homogeneous component of weight {weight} of basis element {index} escapes the span")]
    EscapesSpan { index: usize, weight: i64 },

    #[error("isotropy codimension is {found}, expected {expected}")]
    CodimensionMismatch { expected: usize, found: usize },

    #[error("the map does not preserve the algebra: pushforward of basis element {index} is outside the span")]
    NotPreserved { index: usize },

    #[error("non-polynomial entry in {what}[{index}]")]
    NonPolynomial { what: &'static str, index: usize },

    #[error("derivative identity g' = q^-1 fails at sample {index}")]
    DerivativeMismatch { index: usize },

    #[error("point {index} lies outside the regular set")]
    OutsideRegularSet { index: usize },

    #[error("point is not on the manifold")]
    NotOnManifold,

    #[error("identically zero denominator")]
    ZeroDenominator,

    #[error("singular matrix")]
    Singular,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
