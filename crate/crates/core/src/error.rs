use thiserror::Error;

pub type Result<T> = std::result::Result<T, BouncerError>;

#[derive(Debug, Error)]
pub enum BouncerError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} failed to converge after {iterations} iterations")]
    Convergence { what: String, iterations: usize },

    #[error("quadrature did not reach tolerance {tol:e} (error estimate {estimate:e})")]
    Quadrature { tol: f64, estimate: f64 },

    #[error("basis holds {available} levels, {requested} requested")]
    BasisTooSmall { requested: usize, available: usize },

    #[error("internal consistency: {0}")]
    Consistency(String),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("level {level}: |shift| = {shift:e} exceeds {limit} of E0 = {e0:e}")]
    Validity {
        level: usize,
        shift: f64,
        e0: f64,
        limit: f64,
    },

    #[error("level {level}: second-order sum not converged ({reason})")]
    Truncation { level: usize, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown {kind} `{name}` (known: {known})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("eigensolve: {0}")]
    Eigen(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
