use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("polynomial `{0}` is not weighted-homogeneous")]
    Inhomogeneous(String),
    #[error("the zero polynomial has no weighted degree")]
    ZeroPolynomial,
    #[error("variable index {index} out of range for a ring with {len} variables")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("Groebner pair budget of {0} exhausted")]
    BudgetExceeded(usize),
    #[error("degree bound exceeded: {0}")]
    DegreeBound(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("derivation is not tangent: {0}")]
    NotTangent(String),
    #[error("Lie derivative is singular on piece (index {index}, weight {weight})")]
    SingularLieDerivative { index: i64, weight: i64 },
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded(_) => 2,
            Error::InvariantViolation(_) => 3,
            _ => 1,
        }
    }
}
