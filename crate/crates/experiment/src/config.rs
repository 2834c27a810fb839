use std::path::PathBuf;

use epochlab_nn::{DeepONetSpec, DenseNetworkSpec, OptimizerParams};
use epochlab_sched::ScheduleSpec;
use serde::{Deserialize, Serialize};

use crate::error::ExperimentError;

/// Which training task the sweep runs. Each task fixes the loss (MSE), the
/// sample layout, and which model kinds make sense for it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    /// Operator learning: map a sampled function to its cumulative integral
    /// on the same grid.
    IntegralOperator,
    /// Sequence regression: map a displacement history window to the next
    /// horizon of the damped-oscillator trajectory.
    OscillationRegression,
}

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::IntegralOperator => "integral_operator",
            TaskKind::OscillationRegression => "oscillation_regression",
        }
    }
}

/// Where the task's data comes from. Generated sources are bit-reproducible
/// from their seed; `Directory` points at a previously saved dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DatasetSource {
    GeneratedOperator { function_count: usize, seed: u64 },
    GeneratedOscillation { seed: u64 },
    Directory { path: PathBuf },
}

/// The model under training. Variants carry the full architecture spec; the
/// per-run seed overrides the spec's `init_seed` so that each (seed, run)
/// starts from its own weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    Dense { spec: DenseNetworkSpec },
    DeepOnet { spec: DeepONetSpec },
}

impl ModelSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ModelSpec::Dense { .. } => "dense",
            ModelSpec::DeepOnet { .. } => "deep_onet",
        }
    }
}

/// Full sweep description: the Cartesian product of `scheduler_specs`,
/// `epoch_budgets`, and `seeds` defines the runs.
///
/// Scheduler specs are stored with whatever `max_epoch` they were written
/// with; every run rebinds N to its own budget via `for_epochs`, so the
/// stored value only has to satisfy the spec's own validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: TaskKind,
    pub scheduler_specs: Vec<ScheduleSpec>,
    /// Strictly increasing, all >= 1.
    pub epoch_budgets: Vec<u32>,
    pub seeds: Vec<u64>,
    pub batch_size: usize,
    pub model: ModelSpec,
    pub optimizer: OptimizerParams,
    pub dataset: DatasetSource,
}

impl ExperimentConfig {
    /// Checks list shapes, parameter validity, and that every scheduler can
    /// express every budget (N = budget - 1 must not exceed U for the
    /// hyperbolic families).
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let config_err = |msg: String| Err(ExperimentError::Config(msg));
        if self.scheduler_specs.is_empty() {
            return config_err("scheduler_specs must be non-empty".to_owned());
        }
        if self.epoch_budgets.is_empty() {
            return config_err("epoch_budgets must be non-empty".to_owned());
        }
        if self.seeds.is_empty() {
            return config_err("seeds must be non-empty".to_owned());
        }
        if self.batch_size == 0 {
            return config_err("batch_size must be >= 1".to_owned());
        }
        if self.epoch_budgets[0] == 0 {
            return config_err("epoch budgets must be >= 1".to_owned());
        }
        if self.epoch_budgets.windows(2).any(|w| w[0] >= w[1]) {
            return config_err(format!(
                "epoch_budgets must be strictly increasing, got {:?}",
                self.epoch_budgets
            ));
        }
        match &self.model {
            ModelSpec::Dense { spec } => spec.validate()?,
            ModelSpec::DeepOnet { spec } => spec.validate()?,
        }
        self.optimizer.validate()?;
        match &self.dataset {
            DatasetSource::GeneratedOperator { function_count, .. } => {
                if *function_count < 2 {
                    return config_err(
                        "generated operator dataset needs at least 2 functions".to_owned(),
                    );
                }
                if self.task != TaskKind::IntegralOperator {
                    return config_err(format!(
                        "operator dataset source does not fit task {}",
                        self.task.name()
                    ));
                }
            }
            DatasetSource::GeneratedOscillation { .. } => {
                if self.task != TaskKind::OscillationRegression {
                    return config_err(format!(
                        "oscillation dataset source does not fit task {}",
                        self.task.name()
                    ));
                }
            }
            DatasetSource::Directory { .. } => {}
        }
        for (index, spec) in self.scheduler_specs.iter().enumerate() {
            for &budget in &self.epoch_budgets {
                spec.for_epochs(budget).map_err(|e| {
                    ExperimentError::Config(format!(
                        "scheduler #{index} ({}) cannot run a {budget}-epoch budget: {e}",
                        spec.kind_name()
                    ))
                })?;
            }
        }
        Ok(())
    }
}
