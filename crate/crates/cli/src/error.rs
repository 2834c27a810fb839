use std::fmt;

/// CLI failure split by exit code: bad invocations exit 1, failures during
/// execution exit 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        CliError::Runtime(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Runtime(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<epochlab_experiment::ExperimentError> for CliError {
    fn from(e: epochlab_experiment::ExperimentError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<epochlab_datasets::DatasetError> for CliError {
    fn from(e: epochlab_datasets::DatasetError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<epochlab_metrics::MetricsError> for CliError {
    fn from(e: epochlab_metrics::MetricsError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}
