//! End-to-end sweep behavior: product arithmetic, persistence, resume,
//! determinism, and divergence handling.

use std::fs;

use epochlab_experiment::{
    load_dataset, run_fingerprint, run_single, run_single_with_data, run_sweep, DatasetSource,
    ExperimentConfig, ModelSpec, TaskKind,
};
use epochlab_nn::{Activation, DeepONetSpec, DenseNetworkSpec, OptimizerParams};
use epochlab_sched::ScheduleSpec;

/// Small operator model: 100-sensor branch (the generated grid width), thin
/// hidden layers so tests stay fast.
fn tiny_operator_model() -> ModelSpec {
    ModelSpec::DeepOnet {
        spec: DeepONetSpec {
            branch: DenseNetworkSpec {
                layer_widths: vec![100, 8, 4],
                activation: Activation::Gelu,
                init_seed: 0,
            },
            trunk: DenseNetworkSpec {
                layer_widths: vec![1, 8, 4],
                activation: Activation::Gelu,
                init_seed: 1,
            },
            p: 4,
        },
    }
}

fn operator_config() -> ExperimentConfig {
    ExperimentConfig {
        task: TaskKind::IntegralOperator,
        scheduler_specs: vec![
            ScheduleSpec::Constant { eta_init: 1e-3 },
            ScheduleSpec::CosineAnnealing {
                eta_init: 1e-3,
                eta_min: 1e-5,
                max_epoch: 199,
            },
        ],
        epoch_budgets: vec![2, 3],
        seeds: vec![89, 231],
        batch_size: 4,
        model: tiny_operator_model(),
        optimizer: OptimizerParams::default(),
        dataset: DatasetSource::GeneratedOperator {
            function_count: 10,
            seed: 928,
        },
    }
}

#[test]
fn sweep_runs_full_product_and_resumes_without_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let runs_dir = dir.path().join("runs");
    let config = operator_config();

    let outcome = run_sweep(&config, &runs_dir).unwrap();
    assert!(outcome.failures.is_empty(), "{:?}", outcome.failures);
    assert_eq!(outcome.records.len(), 2 * 2 * 2);

    let mut fingerprints: Vec<String> = outcome
        .records
        .iter()
        .map(|r| r.fingerprint.clone())
        .collect();
    fingerprints.sort();
    fingerprints.dedup();
    assert_eq!(fingerprints.len(), 8, "fingerprints must be distinct");

    let mut files: Vec<_> = fs::read_dir(&runs_dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert_eq!(files.len(), 8);
    let before: Vec<Vec<u8>> = files.iter().map(|p| fs::read(p).unwrap()).collect();

    // Resume: every record already exists, so nothing is retrained or
    // rewritten and the loaded records match the first pass exactly
    // (including wall clock, which came from disk).
    let resumed = run_sweep(&config, &runs_dir).unwrap();
    assert!(resumed.failures.is_empty());
    assert_eq!(resumed.records, outcome.records);
    let mut files_after: Vec<_> = fs::read_dir(&runs_dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files_after.sort();
    assert_eq!(files_after, files);
    let after: Vec<Vec<u8>> = files_after.iter().map(|p| fs::read(p).unwrap()).collect();
    assert_eq!(after, before, "resume must not rewrite record files");

    for record in &outcome.records {
        record.validate().unwrap();
        assert!(!record.diverged);
        assert_eq!(record.lr_series.len(), record.epoch_budget as usize);
        assert!(record.val_loss_series.iter().all(|v| v.is_finite()));
    }
}

#[test]
fn single_runs_are_deterministic_up_to_wall_clock() {
    let config = operator_config();
    let data = load_dataset(&config).unwrap();
    let scheduler = config.scheduler_specs[1];

    let a = run_single_with_data(&config, &scheduler, 89, 3, &data).unwrap();
    let b = run_single_with_data(&config, &scheduler, 89, 3, &data).unwrap();
    assert_eq!(a.fingerprint, b.fingerprint);
    assert_eq!(a.lr_series, b.lr_series);
    assert_eq!(a.val_loss_series, b.val_loss_series);
    assert_eq!(a.diverged, b.diverged);

    let other_seed = run_single_with_data(&config, &scheduler, 231, 3, &data).unwrap();
    assert_ne!(
        a.val_loss_series, other_seed.val_loss_series,
        "different seeds must train different trajectories"
    );
}

#[test]
fn one_epoch_budget_records_exactly_the_initial_lr() {
    let config = operator_config();
    let data = load_dataset(&config).unwrap();
    let scheduler = ScheduleSpec::Hyperbolic {
        eta_init: 1e-3,
        eta_inf: 1e-6,
        max_epoch: 199,
        upper_bound: 250,
    };
    let record = run_single_with_data(&config, &scheduler, 89, 1, &data).unwrap();
    assert_eq!(record.lr_series, vec![1e-3]);
    assert_eq!(record.val_loss_series.len(), 1);
    assert!(!record.diverged);
}

#[test]
fn budget_beyond_upper_bound_is_a_config_error() {
    let config = operator_config();
    let data = load_dataset(&config).unwrap();
    let scheduler = ScheduleSpec::Hyperbolic {
        eta_init: 1e-3,
        eta_inf: 1e-6,
        max_epoch: 200,
        upper_bound: 200,
    };
    // N = budget - 1 may reach U but not exceed it: 202 epochs puts
    // N = 201 past U = 200.
    let err = run_single_with_data(&config, &scheduler, 89, 202, &data).unwrap_err();
    assert!(
        matches!(err, epochlab_experiment::ExperimentError::Config(_)),
        "{err}"
    );
    assert!(scheduler.for_epochs(201).is_ok(), "N = U is the boundary");

    let mut bad = operator_config();
    bad.scheduler_specs = vec![scheduler];
    bad.epoch_budgets = vec![202];
    assert!(bad.validate().is_err());
}

#[test]
fn absurd_learning_rate_diverges_and_truncates() {
    let mut config = operator_config();
    config.scheduler_specs = vec![ScheduleSpec::Constant { eta_init: 1e12 }];
    config.epoch_budgets = vec![4];
    config.seeds = vec![89];
    let dir = tempfile::tempdir().unwrap();
    let outcome = run_sweep(&config, dir.path()).unwrap();
    assert!(outcome.failures.is_empty(), "{:?}", outcome.failures);
    assert_eq!(outcome.records.len(), 1);
    let record = &outcome.records[0];
    assert!(record.diverged, "lr 1e12 must blow the loss up");
    assert!(record.lr_series.len() < 4);
    record.validate().unwrap();

    // The diverged record persists and is skipped on resume like any other.
    let resumed = run_sweep(&config, dir.path()).unwrap();
    assert_eq!(resumed.records[0], *record);
}

#[test]
fn fingerprints_separate_every_run_axis() {
    let config = operator_config();
    let base = run_fingerprint(&config, &config.scheduler_specs[0], 89, 2);

    assert_eq!(
        run_fingerprint(&config, &config.scheduler_specs[0], 89, 2),
        base
    );
    assert_ne!(
        run_fingerprint(&config, &config.scheduler_specs[1], 89, 2),
        base
    );
    assert_ne!(
        run_fingerprint(&config, &config.scheduler_specs[0], 231, 2),
        base
    );
    assert_ne!(
        run_fingerprint(&config, &config.scheduler_specs[0], 89, 3),
        base
    );

    let mut bigger_batches = config.clone();
    bigger_batches.batch_size = 8;
    assert_ne!(
        run_fingerprint(&bigger_batches, &config.scheduler_specs[0], 89, 2),
        base
    );

    let mut other_data = config.clone();
    other_data.dataset = DatasetSource::GeneratedOperator {
        function_count: 10,
        seed: 929,
    };
    assert_ne!(
        run_fingerprint(&other_data, &config.scheduler_specs[0], 89, 2),
        base
    );
}

#[test]
fn oscillation_task_trains_a_dense_net() {
    let config = ExperimentConfig {
        task: TaskKind::OscillationRegression,
        scheduler_specs: vec![ScheduleSpec::Exponential {
            eta_init: 1e-3,
            gamma: 0.97,
        }],
        epoch_budgets: vec![1, 2],
        seeds: vec![89],
        batch_size: 4096,
        model: ModelSpec::Dense {
            spec: DenseNetworkSpec {
                layer_widths: vec![100, 16, 20],
                activation: Activation::Gelu,
                init_seed: 0,
            },
        },
        optimizer: OptimizerParams::default(),
        dataset: DatasetSource::GeneratedOscillation { seed: 814 },
    };
    let dir = tempfile::tempdir().unwrap();
    let outcome = run_sweep(&config, dir.path()).unwrap();
    assert!(outcome.failures.is_empty(), "{:?}", outcome.failures);
    assert_eq!(outcome.records.len(), 2);
    for record in &outcome.records {
        assert!(!record.diverged);
        assert!(record.val_loss_series.iter().all(|v| *v > 0.0));
    }
    // Exponential decay: epoch 1 lr = eta_init * gamma.
    let two_epoch = outcome
        .records
        .iter()
        .find(|r| r.epoch_budget == 2)
        .unwrap();
    assert_eq!(two_epoch.lr_series[0], 1e-3);
    assert!((two_epoch.lr_series[1] - 0.97e-3).abs() < 1e-18);
}

#[test]
fn config_validation_rejects_malformed_sweeps() {
    let good = operator_config();
    good.validate().unwrap();

    let mut no_schedulers = good.clone();
    no_schedulers.scheduler_specs.clear();
    assert!(no_schedulers.validate().is_err());

    let mut no_budgets = good.clone();
    no_budgets.epoch_budgets.clear();
    assert!(no_budgets.validate().is_err());

    let mut no_seeds = good.clone();
    no_seeds.seeds.clear();
    assert!(no_seeds.validate().is_err());

    let mut unsorted = good.clone();
    unsorted.epoch_budgets = vec![3, 2];
    assert!(unsorted.validate().is_err());

    let mut repeated = good.clone();
    repeated.epoch_budgets = vec![2, 2];
    assert!(repeated.validate().is_err());

    let mut zero_budget = good.clone();
    zero_budget.epoch_budgets = vec![0, 2];
    assert!(zero_budget.validate().is_err());

    let mut zero_batch = good.clone();
    zero_batch.batch_size = 0;
    assert!(zero_batch.validate().is_err());

    let mut mismatched = good.clone();
    mismatched.dataset = DatasetSource::GeneratedOscillation { seed: 1 };
    assert!(mismatched.validate().is_err());

    let mut bad_scheduler = good;
    bad_scheduler.scheduler_specs = vec![ScheduleSpec::Constant { eta_init: -1.0 }];
    assert!(bad_scheduler.validate().is_err());
}

#[test]
fn run_single_loads_the_dataset_itself() {
    let mut config = operator_config();
    config.epoch_budgets = vec![2];
    config.seeds = vec![89];
    let record = run_single(&config, &config.scheduler_specs[0], 89, 2).unwrap();
    assert_eq!(record.epoch_budget, 2);
    assert_eq!(record.lr_series, vec![1e-3, 1e-3]);
}
