use std::fs;
use std::path::Path;
use std::time::Instant;

use epochlab_datasets::io::{load_operator_dataset, load_windowed_pair};
use epochlab_datasets::{grf_sample, oscillation_build, GrfSpec, SubstreamRng};
use epochlab_nn::{
    adamw_step, deeponet_batch_loss, deeponet_batch_loss_grad, dense_batch_loss,
    dense_batch_loss_grad, init_deeponet_params, init_dense_params, DeepONetSpec,
    DenseNetworkSpec, NnError, ParameterState,
};
use epochlab_sched::{ScheduleSpec, ScheduleStepper};
use rayon::prelude::*;

use crate::config::{DatasetSource, ExperimentConfig, ModelSpec, TaskKind};
use crate::error::ExperimentError;
use crate::record::{load_record, run_fingerprint, save_record, RunRecord};

/// In-memory training data, loaded once per sweep and shared read-only
/// across runs.
#[derive(Debug, Clone)]
pub enum LoadedDataset {
    Operator {
        train_u: Vec<Vec<f64>>,
        train_g: Vec<Vec<f64>>,
        val_u: Vec<Vec<f64>>,
        val_g: Vec<Vec<f64>>,
        grid: Vec<f64>,
    },
    Windowed {
        train_inputs: Vec<Vec<f64>>,
        train_labels: Vec<Vec<f64>>,
        val_inputs: Vec<Vec<f64>>,
        val_labels: Vec<Vec<f64>>,
    },
}

impl LoadedDataset {
    pub fn train_len(&self) -> usize {
        match self {
            LoadedDataset::Operator { train_u, .. } => train_u.len(),
            LoadedDataset::Windowed { train_inputs, .. } => train_inputs.len(),
        }
    }

    pub fn validation_len(&self) -> usize {
        match self {
            LoadedDataset::Operator { val_u, .. } => val_u.len(),
            LoadedDataset::Windowed { val_inputs, .. } => val_inputs.len(),
        }
    }
}

/// Fraction of operator functions kept for training; the tail is held out.
/// Functions are i.i.d. draws, so a tail split is already unbiased.
const OPERATOR_TRAIN_NUMERATOR: usize = 4;
const OPERATOR_TRAIN_DENOMINATOR: usize = 5;

fn split_operator(
    samples: &[epochlab_datasets::OperatorSample],
    y_points: Vec<f64>,
) -> Result<LoadedDataset, ExperimentError> {
    let count = samples.len();
    let train_count = count * OPERATOR_TRAIN_NUMERATOR / OPERATOR_TRAIN_DENOMINATOR;
    if train_count == 0 || train_count == count {
        return Err(ExperimentError::Config(format!(
            "operator dataset with {count} functions cannot be split into train and validation"
        )));
    }
    let us: Vec<Vec<f64>> = samples.iter().map(|s| s.u_values.clone()).collect();
    let gs: Vec<Vec<f64>> = samples.iter().map(|s| s.g_values.clone()).collect();
    Ok(LoadedDataset::Operator {
        train_u: us[..train_count].to_vec(),
        train_g: gs[..train_count].to_vec(),
        val_u: us[train_count..].to_vec(),
        val_g: gs[train_count..].to_vec(),
        grid: y_points,
    })
}

/// Materializes the config's dataset reference, generating or loading as
/// needed and applying the task's train/validation split.
pub fn load_dataset(config: &ExperimentConfig) -> Result<LoadedDataset, ExperimentError> {
    let loaded = match (&config.task, &config.dataset) {
        (
            TaskKind::IntegralOperator,
            DatasetSource::GeneratedOperator {
                function_count,
                seed,
            },
        ) => {
            let dataset = grf_sample(&GrfSpec::with_function_count(*function_count), *seed)?;
            split_operator(&dataset.samples, dataset.y_points)?
        }
        (TaskKind::IntegralOperator, DatasetSource::Directory { path }) => {
            let (dataset, _spec) = load_operator_dataset(path)?;
            split_operator(&dataset.samples, dataset.y_points)?
        }
        (TaskKind::OscillationRegression, DatasetSource::GeneratedOscillation { seed }) => {
            let (train, validation) = oscillation_build(*seed)?;
            LoadedDataset::Windowed {
                train_inputs: train.inputs,
                train_labels: train.labels,
                val_inputs: validation.inputs,
                val_labels: validation.labels,
            }
        }
        (TaskKind::OscillationRegression, DatasetSource::Directory { path }) => {
            let (train, validation) = load_windowed_pair(path)?;
            LoadedDataset::Windowed {
                train_inputs: train.inputs,
                train_labels: train.labels,
                val_inputs: validation.inputs,
                val_labels: validation.labels,
            }
        }
        (task, source) => {
            return Err(ExperimentError::Config(format!(
                "dataset source {source:?} does not fit task {}",
                task.name()
            )));
        }
    };
    if loaded.train_len() == 0 || loaded.validation_len() == 0 {
        return Err(ExperimentError::Config(
            "dataset must have non-empty train and validation splits".to_owned(),
        ));
    }
    Ok(loaded)
}

/// Model spec with this run's seed substituted for the configured init
/// seeds. The operator network's trunk gets seed + 1 so the two subnets
/// never share an init stream.
enum BoundModel {
    Dense(DenseNetworkSpec),
    DeepOnet(DeepONetSpec),
}

fn bind_model(model: &ModelSpec, seed: u64) -> BoundModel {
    match model {
        ModelSpec::Dense { spec } => {
            let mut spec = spec.clone();
            spec.init_seed = seed;
            BoundModel::Dense(spec)
        }
        ModelSpec::DeepOnet { spec } => {
            let mut spec = spec.clone();
            spec.branch.init_seed = seed;
            spec.trunk.init_seed = seed.wrapping_add(1);
            BoundModel::DeepOnet(spec)
        }
    }
}

fn gather(rows: &[Vec<f64>], order: &[usize]) -> Vec<Vec<f64>> {
    order.iter().map(|&i| rows[i].clone()).collect()
}

/// Trains one run against an already loaded dataset. `scheduler` is the
/// config-level spec; N is rebound to this run's budget here.
pub fn run_single_with_data(
    config: &ExperimentConfig,
    scheduler: &ScheduleSpec,
    seed: u64,
    epoch_budget: u32,
    data: &LoadedDataset,
) -> Result<RunRecord, ExperimentError> {
    let bound_spec = scheduler.for_epochs(epoch_budget).map_err(|e| {
        ExperimentError::Config(format!(
            "{} scheduler cannot run a {epoch_budget}-epoch budget: {e}",
            scheduler.kind_name()
        ))
    })?;
    if config.batch_size == 0 {
        return Err(ExperimentError::Config("batch_size must be >= 1".to_owned()));
    }
    let started = Instant::now();
    let mut stepper = ScheduleStepper::new(bound_spec)?;

    let (train_inputs, train_targets, val_inputs, val_targets, grid): (
        &[Vec<f64>],
        &[Vec<f64>],
        &[Vec<f64>],
        &[Vec<f64>],
        Option<&[f64]>,
    ) = match data {
        LoadedDataset::Operator {
            train_u,
            train_g,
            val_u,
            val_g,
            grid,
        } => (train_u, train_g, val_u, val_g, Some(grid)),
        LoadedDataset::Windowed {
            train_inputs,
            train_labels,
            val_inputs,
            val_labels,
        } => (train_inputs, train_labels, val_inputs, val_labels, None),
    };

    let model = bind_model(&config.model, seed);
    if matches!(model, BoundModel::DeepOnet(_)) && grid.is_none() {
        return Err(ExperimentError::Config(
            "operator network needs an operator dataset with a sampling grid".to_owned(),
        ));
    }
    let params = match &model {
        BoundModel::Dense(spec) => init_dense_params(spec)?,
        BoundModel::DeepOnet(spec) => init_deeponet_params(spec)?,
    };
    let mut state = ParameterState::new(params);

    let loss_grad = |params: &[f64],
                     inputs: &[Vec<f64>],
                     targets: &[Vec<f64>]|
     -> Result<(f64, Vec<f64>), NnError> {
        match &model {
            BoundModel::Dense(spec) => dense_batch_loss_grad(spec, params, inputs, targets),
            BoundModel::DeepOnet(spec) => {
                deeponet_batch_loss_grad(spec, params, inputs, grid.unwrap(), targets)
            }
        }
    };
    let loss_only =
        |params: &[f64], inputs: &[Vec<f64>], targets: &[Vec<f64>]| -> Result<f64, NnError> {
            match &model {
                BoundModel::Dense(spec) => dense_batch_loss(spec, params, inputs, targets),
                BoundModel::DeepOnet(spec) => {
                    deeponet_batch_loss(spec, params, inputs, grid.unwrap(), targets)
                }
            }
        };

    let mut lr_series = Vec::with_capacity(epoch_budget as usize);
    let mut val_loss_series = Vec::with_capacity(epoch_budget as usize);
    let mut diverged = false;

    'epochs: for epoch in 0..epoch_budget {
        let lr = stepper.current_lr();
        let mut order: Vec<usize> = (0..train_inputs.len()).collect();
        SubstreamRng::new(seed, u64::from(epoch) + 1).shuffle(&mut order);
        for batch in order.chunks(config.batch_size) {
            let inputs = gather(train_inputs, batch);
            let targets = gather(train_targets, batch);
            let (loss, grads) = loss_grad(&state.params, &inputs, &targets)?;
            if !loss.is_finite() {
                diverged = true;
                break 'epochs;
            }
            match adamw_step(&mut state, &grads, lr, &config.optimizer) {
                Ok(()) => {}
                Err(NnError::NonFiniteGradient { .. }) => {
                    diverged = true;
                    break 'epochs;
                }
                Err(e) => return Err(e.into()),
            }
        }
        let val = loss_only(&state.params, val_inputs, val_targets)?;
        if !val.is_finite() {
            diverged = true;
            break 'epochs;
        }
        lr_series.push(lr);
        val_loss_series.push(val);
        if epoch + 1 < epoch_budget {
            stepper.step()?;
        }
    }

    let record = RunRecord {
        fingerprint: run_fingerprint(config, scheduler, seed, epoch_budget),
        scheduler: *scheduler,
        seed,
        epoch_budget,
        lr_series,
        val_loss_series,
        diverged,
        wall_seconds: started.elapsed().as_secs_f64(),
    };
    record.validate()?;
    Ok(record)
}

/// Loads the config's dataset and trains one run. Sweeps should load once
/// and call [`run_single_with_data`] instead.
pub fn run_single(
    config: &ExperimentConfig,
    scheduler: &ScheduleSpec,
    seed: u64,
    epoch_budget: u32,
) -> Result<RunRecord, ExperimentError> {
    let data = load_dataset(config)?;
    run_single_with_data(config, scheduler, seed, epoch_budget, &data)
}

/// One run that could not produce a record (I/O trouble, shape mismatch,
/// ...). Divergence is not a failure; it yields a truncated record.
#[derive(Debug)]
pub struct RunFailure {
    pub scheduler_index: usize,
    pub epoch_budget: u32,
    pub seed: u64,
    pub error: String,
}

/// Everything a sweep produced: records in job order (schedulers outer,
/// then budgets, then seeds) plus per-run failures that did not stop the
/// sweep.
#[derive(Debug)]
pub struct SweepOutcome {
    pub records: Vec<RunRecord>,
    pub failures: Vec<RunFailure>,
}

/// Runs the full scheduler x budget x seed product, persisting each record
/// to `runs_dir/<fingerprint>.json` as it completes. Runs whose record file
/// already exists are loaded instead of re-trained, so an interrupted sweep
/// resumes without duplicating work. Runs execute in parallel; a failing
/// run is reported in the outcome and does not abort the rest.
pub fn run_sweep(
    config: &ExperimentConfig,
    runs_dir: &Path,
) -> Result<SweepOutcome, ExperimentError> {
    config.validate()?;
    let data = load_dataset(config)?;
    fs::create_dir_all(runs_dir)?;

    let mut jobs = Vec::new();
    for scheduler_index in 0..config.scheduler_specs.len() {
        for &epoch_budget in &config.epoch_budgets {
            for &seed in &config.seeds {
                jobs.push((scheduler_index, epoch_budget, seed));
            }
        }
    }

    let results: Vec<(usize, u32, u64, Result<RunRecord, ExperimentError>)> = jobs
        .into_par_iter()
        .map(|(scheduler_index, epoch_budget, seed)| {
            let scheduler = &config.scheduler_specs[scheduler_index];
            let fingerprint = run_fingerprint(config, scheduler, seed, epoch_budget);
            let path = runs_dir.join(format!("{fingerprint}.json"));
            let result = if path.exists() {
                load_record(&path)
            } else {
                run_single_with_data(config, scheduler, seed, epoch_budget, &data)
                    .and_then(|record| {
                        save_record(&path, &record)?;
                        Ok(record)
                    })
            };
            (scheduler_index, epoch_budget, seed, result)
        })
        .collect();

    let mut outcome = SweepOutcome {
        records: Vec::new(),
        failures: Vec::new(),
    };
    for (scheduler_index, epoch_budget, seed, result) in results {
        match result {
            Ok(record) => outcome.records.push(record),
            Err(error) => outcome.failures.push(RunFailure {
                scheduler_index,
                epoch_budget,
                seed,
                error: error.to_string(),
            }),
        }
    }
    Ok(outcome)
}
