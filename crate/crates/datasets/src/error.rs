use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("invalid dataset spec: {0}")]
    InvalidSpec(String),

    #[error("series of length {len} is too short for history {history} + horizon {horizon}")]
    SeriesTooShort {
        len: usize,
        history: usize,
        horizon: usize,
    },

    #[error("cannot min-max normalize constant data (min == max == {0})")]
    ConstantData(f64),

    #[error(
        "kernel Cholesky factorization failed for function {function_index} \
         even at the maximum jitter {max_jitter:e}"
    )]
    CholeskyFailure {
        function_index: usize,
        max_jitter: f64,
    },

    #[error("dataset io failed: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed dataset metadata: {0}")]
    Meta(String),
}
