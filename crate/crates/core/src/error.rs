use thiserror::Error as ThisError;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("entries from different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("matrix is singular")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("spectra overlap: the Sylvester system is singular")]
    SpectraOverlap,
    #[error("characteristic polynomial has an irreducible factor of degree {0}")]
    IrreducibleFactor(usize),
    #[error("integer coefficients too large for root search")]
    CoefficientsTooLarge,

    #[error("symplectic space of odd dimension {0}")]
    OddSymplectic(usize),
    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),

    #[error("datum invariant violated: {0}")]
    InvariantViolation(String),
    #[error("{0} out of range")]
    OutOfRange(String),
    #[error("element does not lie in the group")]
    NotInGroup,

    #[error("x0 has rank {0}, expected 1")]
    WrongStratum(usize),
    #[error("source rank r = {0} must be at least 2")]
    BadRank(usize),
    #[error("enumeration of {0} points exceeds the limit")]
    TooLarge(String),

    #[error("blocks have different flavors or framing spaces")]
    FlavorMismatch,
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("postcondition failed: {0}")]
    Postcondition(String),

    #[error("endomorphism is not nilpotent")]
    NotNilpotent,
    #[error("endomorphism is not self-adjoint")]
    NotSelfAdjoint,
    #[error("partition {0} is not of even type")]
    NotEvenType(String),
    #[error("no delta rule covers this diagram: {0}")]
    RuleUnavailable(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("orthogonal group requested without an extra component")]
    MissingComponent,
    #[error("work limit exceeded: {0}")]
    WorkLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
