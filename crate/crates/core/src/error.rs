use thiserror::Error;

use crate::expr::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op} is undefined at {value}")]
    Domain { op: &'static str, value: f64 },

    #[error("axis index {0} out of range (expected 1..=3)")]
    AxisOutOfRange(usize),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("singular {what} at {point:?}")]
    Singular { what: &'static str, point: [f64; 3] },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("vector field is not tangent to the foliation at {point:?} (df(X) = {defect:e})")]
    NotTangent { point: [f64; 3], defect: f64 },

    #[error("rank collapse of {what} at {point:?}")]
    RankCollapse { what: &'static str, point: [f64; 3] },

    #[error("{0} is not supported for this equation family")]
    Unsupported(&'static str),

    #[error("point {point:?} lies outside the chart domain: {reason}")]
    OutsideDomain { point: [f64; 3], reason: String },

    #[error("root finder did not converge after {iterations} iterations (defect {defect:e})")]
    NoConvergence { iterations: usize, defect: f64 },

    #[error("derivative degenerates at the root ({0:e})")]
    DerivativeDegenerate(f64),

    #[error("leaf tracing failed: {0}")]
    LeafTracing(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidSpec(msg.into())
    }
}
