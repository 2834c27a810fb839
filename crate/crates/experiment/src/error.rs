use epochlab_datasets::DatasetError;
use epochlab_metrics::MetricsError;
use epochlab_nn::NnError;
use epochlab_sched::ScheduleError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    /// Invalid or internally inconsistent experiment configuration,
    /// including scheduler/budget combinations the schedule cannot express.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("schedule error: {0}")]
    Schedule(#[from] ScheduleError),

    #[error("dataset error: {0}")]
    Dataset(#[from] DatasetError),

    #[error("network error: {0}")]
    Network(#[from] NnError),

    #[error("metrics error: {0}")]
    Metrics(#[from] MetricsError),

    #[error("analysis needs at least 2 epoch budgets for {label}, found {budgets}")]
    InsufficientBudgets { label: String, budgets: usize },

    #[error("run record {path} is malformed: {reason}")]
    MalformedRecord { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}
