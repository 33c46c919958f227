use thiserror::Error;

/// Errors produced by the bandit library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no closed form for the KL divergence between these distributions")]
    NoClosedFormKl,

    #[error("scaling functions are defined for t >= 3 (got t = {0})")]
    ScalingDomain(u64),

    #[error("threshold overflow: {0} is not reached below 2^63")]
    ThresholdOverflow(String),

    #[error("truncation threshold {requested} is below the watermark {watermark}")]
    NonMonotoneThreshold { requested: f64, watermark: f64 },

    #[error("estimator holds no samples")]
    EmptyEstimator,

    #[error("non-finite sample value {0}")]
    NonFiniteSample(f64),

    #[error("bound invalid below t1: gap {gap} * ln f(t) <= 2")]
    BoundInvalidBelowT1 { gap: f64 },

    #[error("certificate does not match policy kind: {0}")]
    CertificateMismatch(String),

    #[error("d = 0; lower bound infinite")]
    LowerBoundInfinite,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
