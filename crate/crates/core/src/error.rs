use weyl_forge_exact::ExactError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("variable mismatch: {0} vs {1}")]
    VariableMismatch(String, String),
    #[error("not in the Weyl algebra: {0}")]
    NotPolynomial(String),
    #[error("coefficient pole at {0}")]
    Pole(String),
    #[error("lagrangian condition fails: {0}")]
    NotLagrangian(String),
    #[error("airy symbols survive reduction: {0}")]
    NotRational(String),
    #[error("factorization identity fails: {0}")]
    FactorizationFails(String),
    #[error("not in the Fourier algebra: {0}")]
    NotInFourierAlgebra(String),
    #[error("no relation within bounds: {0}")]
    NoRelation(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
