//! Sweep orchestration for the scheduling laboratory.
//!
//! An [`ExperimentConfig`] names a task, a dataset, a model, an optimizer,
//! and the Cartesian product of scheduler specs, epoch budgets, and seeds.
//! [`run_sweep`] trains every combination, persisting one JSON record per
//! run keyed by a content fingerprint so interrupted sweeps resume without
//! repeating work. [`analyze_sweep`] reduces the records to per-scheduler
//! statistics: mean endpoints per budget, interval improvements, a power-law
//! fit of endpoint against budget, and the decoupling score between the
//! smallest- and largest-budget learning curves.
//!
//! Everything is deterministic given (config, seed): datasets, weight
//! inits, and per-epoch shuffles all derive from named seed streams, and
//! analysis is a pure function of the record set.

mod analyze;
mod config;
mod error;
mod presets;
mod record;
mod run;

pub use analyze::{analyze_sweep, SchedulerReport, SweepReport, REPORT_SMOOTHING};
pub use config::{DatasetSource, ExperimentConfig, ModelSpec, TaskKind};
pub use error::ExperimentError;
pub use presets::{preset, preset_names, PRESETS, PRESET_MAX_EPOCH};
pub use record::{load_record, run_fingerprint, save_record, RunRecord};
pub use run::{
    load_dataset, run_single, run_single_with_data, run_sweep, LoadedDataset, RunFailure,
    SweepOutcome,
};
