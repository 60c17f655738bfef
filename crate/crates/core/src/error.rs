use thiserror::Error;

use crate::types::Strategy;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{field} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        field: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("probabilities sum to {sum}, expected 1")]
    ProbabilitySum { sum: f64 },

    #[error("a bet needs at least one outcome")]
    EmptyBet,

    #[error("invalid offer string {input:?}: {reason}")]
    ParseOffer { input: String, reason: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("gradient ascent did not converge after {iterations} iterations (last iterate a={}, b={}, |grad|={gradient_norm:e})", .last.a(), .last.b())]
    NonConvergence {
        iterations: usize,
        last: Strategy,
        gradient_norm: f64,
    },

    #[error("factorization identity violated: {left} vs {right} (internal error)")]
    IdentityViolated { left: f64, right: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
