use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field size {0} is not a prime")]
    NonPrimeField(u32),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("expected a monic polynomial, got {0}")]
    NotMonic(String),

    #[error("expected a non-constant polynomial, got {0}")]
    ConstantPolynomial(String),

    #[error("polynomials over different fields (F_{0} vs F_{1})")]
    FieldMismatch(u32, u32),

    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("pair ({u}, {v}) does not define a point of P^1(A/{level})")]
    NotCoprime { u: String, v: String, level: String },

    #[error("level must have positive degree (the unit ideal gives an empty projective line)")]
    DegenerateLevel,

    #[error("exponent tuple {0:?} is outside the admissible range")]
    ExponentOutOfRange(Vec<u32>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("Hecke image leaves the cuspidal subspace (column {0})")]
    StabilityViolation(usize),

    #[error("operators are expressed on different bases")]
    BasisMismatch,

    #[error("level {level} has {size} generators, above the feasibility cap {cap}")]
    Infeasible { level: String, size: usize, cap: usize },

    #[error("cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
