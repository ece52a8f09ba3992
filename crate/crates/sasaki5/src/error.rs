use thiserror::Error;

/// Library-wide error type. Variants mirror the failure surfaces of the
/// public operations: argument validation, unsolvable arithmetic systems,
/// and model bookkeeping errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A Bezout/Diophantine system has no solution; the message names the
    /// offending gcd so that parameter searches can skip cheaply.
    #[error("unsolvable: {0}")]
    Unsolvable(String),

    #[error("surface mismatch: {0}")]
    SurfaceMismatch(String),

    #[error("not a smooth curve class: {0}")]
    NotASmoothCurveClass(String),

    #[error("model incomplete: {0}")]
    ModelIncomplete(String),

    /// A quantity that must be integral by theory came out fractional;
    /// this indicates inconsistent input data, never a rounding issue.
    #[error("integrality failure: {0}")]
    IntegralityFailure(String),

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// Malformed user input (CLI flags, JSON documents). Maps to exit code 2.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
