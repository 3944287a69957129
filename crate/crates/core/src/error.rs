use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("insufficient precision: {needed} bits needed, {available} available")]
    InsufficientPrecision { needed: usize, available: usize },

    #[error("{what} = {value} exceeds the limit {limit}")]
    SizeLimit {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("{0} is undefined")]
    Undefined(&'static str),

    #[error("input must be an exact rational")]
    NonRationalInput,

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("quadrature did not reach relative tolerance {tolerance:e} (estimate {estimate}, refined {refined})")]
    QuadratureFailure {
        estimate: f64,
        refined: f64,
        tolerance: f64,
    },

    #[error("Markov subsystem is empty")]
    EmptySystem,

    #[error("power iteration stalled after {iterations} iterations (relative gap {gap:e})")]
    PowerIterationStall { iterations: usize, gap: f64 },

    #[error("t-grid too narrow to decide the Legendre transform at alpha = {alpha}")]
    GridTooNarrow { alpha: f64 },

    #[error("alpha = {alpha} lies outside the scan window [{lower}, {upper}]")]
    WindowViolation { alpha: f64, lower: f64, upper: f64 },
}
