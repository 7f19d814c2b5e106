use crate::exprlang::{EvalError, ParseError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{context}: {source}")]
    Parse {
        context: String,
        #[source]
        source: ParseError,
    },
    #[error("{context}: {source}")]
    Eval {
        context: String,
        #[source]
        source: EvalError,
    },
    #[error("invalid manifold definition: {0}")]
    Definition(String),
    #[error("point {point:?} lies outside the domain box")]
    OutsideDomain { point: Vec<f64> },
    #[error("difference stencil at {point:?} leaves the domain along axis {axis}")]
    StencilOutsideDomain { point: Vec<f64>, axis: usize },
    #[error("metric is singular at {point:?} (determinant {det:e})")]
    MetricSingular { point: Vec<f64>, det: f64 },
    #[error("metric is not positive definite at {point:?} (leading minor {order} = {minor:e})")]
    MetricNotPositiveDefinite {
        point: Vec<f64>,
        order: usize,
        minor: f64,
    },
    #[error("field is not unit at {point:?}: |g(V,V) - 1| = {defect:e}")]
    NotUnit { point: Vec<f64>, defect: f64 },
    #[error("field is not Killing at {point:?}: defect {defect:e}")]
    NotKilling { point: Vec<f64>, defect: f64 },
    #[error("rank of the covariant derivative of V is odd ({rank}) at {point:?}")]
    OddRank { point: Vec<f64>, rank: usize },
    #[error("frame validation failed: {0}")]
    FrameValidation(String),
    #[error("rotation rates too close to split planes at {point:?} (gap {gap:e})")]
    NearDegenerate { point: Vec<f64>, gap: f64 },
    #[error("cannot align stencil frames: {0}")]
    Alignment(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("unknown catalog entry \"{0}\"")]
    UnknownEntry(String),
    #[error("parameter error: {0}")]
    Parameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
