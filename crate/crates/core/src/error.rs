use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {what}")]
    NonFinite { what: &'static str },

    /// Subdivision budget ran out; carries the best value reached and its
    /// error estimate so callers can still inspect the partial result.
    #[error("quadrature budget exhausted (best value {value}, error estimate {error_estimate})")]
    BudgetExhausted { value: f64, error_estimate: f64 },

    #[error("integrand returned a non-finite value at x = {x}")]
    NanIntegrand { x: f64 },

    #[error("divergent integral")]
    Divergent,

    #[error("singularity collision at x = {point}: the squared function is not integrable")]
    SingularityCollision { point: f64 },

    #[error("invalid function spec: {0}")]
    InvalidSpec(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("zero denominator: spec has vanishing integral or norm")]
    ZeroDenominator,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
