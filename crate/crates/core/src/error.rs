use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial has a non-finite coefficient")]
    NonFiniteCoefficient,
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("{what}: tolerance not reached (estimated error {estimate:e})")]
    ToleranceNotReached { what: &'static str, estimate: f64 },
    #[error("polynomial is not reciprocal")]
    NotReciprocal,
    #[error("polynomial has odd degree {0}")]
    OddDegree(usize),
    #[error("division by the zero rational function")]
    DivisionByZeroFunction,
    #[error("denominator has a pole that is not a simple integer")]
    NonIntegerPole,
    #[error("denominator has a repeated pole at {0}")]
    RepeatedPole(i64),
    #[error("pfaffian needs an even-sized matrix, got size {0}")]
    OddSize(usize),
    #[error("matrix is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("checkerboard zero pattern violated at ({0}, {1})")]
    PatternViolation(usize, usize),
    #[error("integral diverges: s = {s} must exceed {bound}")]
    ConvergenceViolation { s: f64, bound: f64 },
    #[error("degenerate form at index {0}")]
    DegenerateForm(usize),
    #[error("root function is not even: phi(-z) != phi(z) near z = {0}")]
    SymmetryViolation(f64),
    #[error("no sign change found in ({lo}, {hi})")]
    ZeroNotBracketed { lo: f64, hi: f64 },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
