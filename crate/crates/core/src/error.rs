use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by the zero function")]
    DivisionByZero,
    #[error("a nonconstant rational map is required")]
    ConstantMap,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("operator is not Fuchsian at {location}: {detail}")]
    NonFuchsian { location: String, detail: String },
    #[error("zero discriminant: g2^3 - 27 g3^2 = 0")]
    ZeroDiscriminant,
    #[error("exponent difference {0} is an integer (degenerate case)")]
    IntegralExponent(String),
    #[error("inconsistent forced multiplicities: {0}")]
    InconsistentAssignment(String),
    #[error("root finder did not converge: residual {achieved:e} > {wanted:e}")]
    RootConvergence { achieved: f64, wanted: f64 },
    #[error("step size underflow near {0}")]
    StepUnderflow(String),
    #[error("non-finite values during integration")]
    NonFinite,
    #[error("ill-conditioned group closure: {0}; rerun with tighter integration tolerance")]
    IllConditioned(String),
    #[error("branch collision: {0}")]
    BranchCollision(String),
    #[error("point {0} is singular")]
    SingularPoint(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
