use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("invalid learning curve: {0}")]
    InvalidCurve(String),

    #[error("invalid smoothing spec: {0}")]
    InvalidSmoothing(String),

    #[error("curve of length {len} is shorter than the smoothing window {window}")]
    CurveTooShort { len: usize, window: usize },

    #[error("smoothed curve is non-positive at index {index}; curve difference is undefined")]
    NonPositiveSmoothed { index: usize },

    #[error("invalid schedule series: {0}")]
    InvalidSeries(String),

    #[error("schedule never reaches 80% of its initial learning rate")]
    NoCrossing,

    #[error("invalid regression input: {0}")]
    InvalidInput(String),

    #[error("slope is undefined: all x values coincide")]
    UndefinedSlope,
}
