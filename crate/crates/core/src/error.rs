use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("{p}^{d} points exceed the dense limit of 2^22")]
    TooLarge { p: u64, d: usize },
    #[error("point sets belong to different field contexts")]
    ContextMismatch,
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {0} is outside [0, p)")]
    CoordinateOutOfRange(u64),

    #[error("character sum parameter must be nonzero")]
    ZeroParameter,
    #[error("polynomial degree {degree} is divisible by p = {p}")]
    DegreeDivisibleByP { degree: usize, p: u64 },
    #[error("polynomial is constant")]
    ConstantPolynomial,

    #[error("matrix is singular over F_p")]
    SingularMatrix,
    #[error("set is empty")]
    EmptySet,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("polynomial has no quadratic part")]
    NotQuadratic,
    #[error("polynomial depends on a single variable")]
    SingleVariable,
    #[error("conic is degenerate (reduces to a pair of lines or a point)")]
    DegenerateConic,
    #[error("polynomial graph needs degree >= 2 not divisible by p (got degree {degree}, p = {p})")]
    BadDegree { degree: usize, p: u64 },
    #[error("curve family {family} requires dimension {required}")]
    UnsupportedDimension { family: &'static str, required: usize },
    #[error("bad curve descriptor {0:?}")]
    BadDescriptor(String),

    #[error("shape is not symmetric under negation")]
    NotSymmetric,
    #[error("no witness found")]
    NotFound,

    #[error("sample size {size} outside [0, {max}]")]
    SizeOutOfRange { size: usize, max: usize },
    #[error("set is empty or the whole space")]
    DegenerateSize,
    #[error("exhaustive certification needs about {needed} tuples, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
