use std::fs;
use std::path::Path;

use epochlab_sched::ScheduleSpec;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::ExperimentError;

/// One completed training run: the learning-rate series actually applied and
/// the validation loss observed after each epoch.
///
/// `scheduler` is stored as written in the config (before N is rebound to
/// this run's budget), so records from different budgets of the same sweep
/// carry identical scheduler specs and group together in analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub fingerprint: String,
    pub scheduler: ScheduleSpec,
    pub seed: u64,
    pub epoch_budget: u32,
    pub lr_series: Vec<f64>,
    pub val_loss_series: Vec<f64>,
    /// True when training hit a non-finite loss or gradient; the series are
    /// then truncated at the last finite epoch.
    pub diverged: bool,
    pub wall_seconds: f64,
}

impl RunRecord {
    /// Series lengths must agree, and equal the budget unless the run
    /// diverged (then they are shorter).
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.lr_series.len() != self.val_loss_series.len() {
            return Err(ExperimentError::Config(format!(
                "lr series has {} entries but loss series has {}",
                self.lr_series.len(),
                self.val_loss_series.len()
            )));
        }
        let expected = self.epoch_budget as usize;
        if self.diverged {
            if self.lr_series.len() >= expected {
                return Err(ExperimentError::Config(format!(
                    "diverged record must be truncated below its budget {expected}, got {}",
                    self.lr_series.len()
                )));
            }
        } else if self.lr_series.len() != expected {
            return Err(ExperimentError::Config(format!(
                "complete record must cover its {expected}-epoch budget, got {}",
                self.lr_series.len()
            )));
        }
        Ok(())
    }
}

/// The identity of a run. Serialized to canonical JSON and hashed; every
/// field that changes the trained trajectory is included, and nothing else
/// (wall clock and output paths stay out).
#[derive(Serialize)]
struct FingerprintKey<'a> {
    task: crate::config::TaskKind,
    scheduler: &'a ScheduleSpec,
    seed: u64,
    epoch_budget: u32,
    batch_size: usize,
    model: &'a crate::config::ModelSpec,
    optimizer: &'a epochlab_nn::OptimizerParams,
    dataset: &'a crate::config::DatasetSource,
}

/// Stable hex id for one (config, scheduler, seed, budget) run.
pub fn run_fingerprint(
    config: &ExperimentConfig,
    scheduler: &ScheduleSpec,
    seed: u64,
    epoch_budget: u32,
) -> String {
    let key = FingerprintKey {
        task: config.task,
        scheduler,
        seed,
        epoch_budget,
        batch_size: config.batch_size,
        model: &config.model,
        optimizer: &config.optimizer,
        dataset: &config.dataset,
    };
    let json = serde_json::to_string(&key).expect("fingerprint key serializes");
    hex::encode(Sha256::digest(json.as_bytes()))
}

/// Writes the record as pretty JSON via a temp file + rename, so a crash
/// mid-write never leaves a truncated record behind.
pub fn save_record(path: &Path, record: &RunRecord) -> Result<(), ExperimentError> {
    record.validate()?;
    let json = serde_json::to_string_pretty(record)?;
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, json.as_bytes())?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_record(path: &Path) -> Result<RunRecord, ExperimentError> {
    let bytes = fs::read(path)?;
    let record: RunRecord =
        serde_json::from_slice(&bytes).map_err(|e| ExperimentError::MalformedRecord {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
    record
        .validate()
        .map_err(|e| ExperimentError::MalformedRecord {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
    Ok(record)
}
