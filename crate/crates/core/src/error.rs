use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Numeric payloads are widened to `f64` so the type is independent of the
/// scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (max |M - M†| = {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("operator is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("invalid spin {0}: 2j must be a positive integer")]
    InvalidSpin(f64),

    #[error("invalid measurement {label}: {reason}")]
    InvalidMeasurement { label: String, reason: String },

    #[error("invalid joint distribution: {0}")]
    InvalidDistribution(String),

    #[error("conditioning on outcome {0} which has zero probability")]
    ZeroProbability(usize),

    #[error("invalid estimator: {0}")]
    InvalidEstimator(String),

    #[error("invalid measurement strategy: {0}")]
    InvalidStrategy(String),

    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange {
        name: String,
        value: f64,
        range: String,
    },

    #[error("conditioning quadrature {0} has variance below 1e-12")]
    DegenerateConditioning(usize),

    #[error("observables ({0}) do not satisfy [b1, b2] = i b3 (residual {1:e})")]
    Commutation(String, f64),

    #[error("zero-variance Alice observable in term {0}; gain cannot be optimized")]
    ZeroVariance(usize),

    #[error("convexity spot-check failed for term {term} at alice outcome {alpha}")]
    NotConvex { term: usize, alpha: f64 },

    #[error("malformed criterion input: {0}")]
    Malformed(String),

    #[error("linear program: {0}")]
    Solver(String),

    #[error("deterministic strategy count {0} exceeds the enumeration cap")]
    EnumerationOverflow(u128),

    #[error("hidden-state grid is empty")]
    EmptyGrid,

    #[error("dual certificate fails grid separation check: {0}")]
    Separation(String),

    #[error("unknown criterion id: {0}")]
    UnknownCriterion(String),

    #[error("unknown state family: {0}")]
    UnknownFamily(String),

    #[error("criterion {criterion} does not apply to family {family}")]
    Incompatible { criterion: String, family: String },

    #[error("bracket error: {0}")]
    Bracket(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
