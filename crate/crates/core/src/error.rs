use thiserror::Error;

use crate::expr::{EvalError, ParseError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("invalid chart: {0}")]
    Chart(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid metallic parameters: {0}")]
    Params(String),
    /// A structural precondition (F^2 = I, l^2 = l, ...) failed at a point.
    #[error("{condition} does not hold: residual {residual:e} at {point:?}")]
    Precondition {
        condition: String,
        residual: f64,
        point: Vec<f64>,
    },
    #[error("invalid family member: {0}")]
    Family(String),
    #[error("singular metric at {point:?} (pivot ratio {pivot_ratio:e})")]
    SingularMetric { point: Vec<f64>, pivot_ratio: f64 },
    #[error("connection is not symmetric at {point:?}: |G^k_ij - G^k_ji| = {residual:e}")]
    AsymmetricConnection { point: Vec<f64>, residual: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
