//! Sweep analysis on synthetic records: grouping, endpoint statistics,
//! power fits, decoupling scores, and report emitters. No training here;
//! every record is constructed by hand.

use approx::assert_relative_eq;
use epochlab_experiment::{analyze_sweep, ExperimentError, RunRecord};
use epochlab_sched::ScheduleSpec;

/// Record with a linearly interpolated loss curve from `start` down to
/// `end` over `budget` epochs.
fn synthetic_record(
    scheduler: ScheduleSpec,
    seed: u64,
    budget: u32,
    start: f64,
    end: f64,
) -> RunRecord {
    let count = budget as usize;
    let val_loss_series: Vec<f64> = (0..count)
        .map(|i| {
            if count == 1 {
                end
            } else {
                start + (end - start) * i as f64 / (count - 1) as f64
            }
        })
        .collect();
    RunRecord {
        fingerprint: format!("synthetic-{}-{seed}-{budget}", scheduler.kind_name()),
        scheduler,
        seed,
        epoch_budget: budget,
        lr_series: vec![1e-3; count],
        val_loss_series,
        diverged: false,
        wall_seconds: 0.0,
    }
}

fn constant_spec(eta_init: f64) -> ScheduleSpec {
    ScheduleSpec::Constant { eta_init }
}

#[test]
fn exact_power_law_is_recovered() {
    // endpoint = 2 * budget^(-1.5), two seeds with identical curves.
    let spec = constant_spec(1e-3);
    let mut records = Vec::new();
    for &budget in &[10u32, 20, 40, 80] {
        let end = 2.0 * f64::from(budget).powf(-1.5);
        for seed in [1, 2] {
            records.push(synthetic_record(spec, seed, budget, 1.0, end));
        }
    }
    let report = analyze_sweep(&records).unwrap();
    assert_eq!(report.schedulers.len(), 1);
    let entry = &report.schedulers[0];
    assert_eq!(entry.label, "constant");
    assert_eq!(entry.budgets, vec![10, 20, 40, 80]);

    let regression = entry.regression.as_ref().unwrap();
    assert_relative_eq!(regression.b, -1.5, epsilon = 1e-10);
    assert_relative_eq!(regression.a.exp(), 2.0, max_relative = 1e-10);
    assert!(regression.r_squared > 1.0 - 1e-12);

    // Endpoints shrink by 1 - 2^(-1.5) per doubling.
    let expected_pct = (1.0 - 2.0_f64.powf(-1.5)) * 100.0;
    assert_relative_eq!(entry.improvement.mean_pct, expected_pct, epsilon = 1e-9);
    assert_relative_eq!(entry.improvement.std_pct, 0.0, epsilon = 1e-9);
    assert_eq!(entry.improvement.interval, 10);
}

#[test]
fn coinciding_constant_curves_score_zero_decoupling() {
    // Flat curves at the same level: smoothing preserves constants (to
    // rounding), so the compared prefix coincides and the score vanishes.
    let spec = constant_spec(1e-3);
    let records = vec![
        synthetic_record(spec, 1, 12, 0.5, 0.5),
        synthetic_record(spec, 1, 15, 0.5, 0.5),
    ];
    let report = analyze_sweep(&records).unwrap();
    let entry = &report.schedulers[0];
    assert!(entry.slcd.unwrap() < 1e-13, "{:?}", entry.slcd);
    // Two budgets only: no power fit.
    assert!(entry.regression.is_none());
}

#[test]
fn separated_curves_score_positive_decoupling() {
    let spec = constant_spec(1e-3);
    let records = vec![
        synthetic_record(spec, 1, 12, 0.9, 0.9),
        synthetic_record(spec, 1, 15, 0.3, 0.3),
    ];
    let report = analyze_sweep(&records).unwrap();
    let entry = &report.schedulers[0];
    // |0.9 - 0.3| / (0.9 + 0.3) = 0.5 at every compared epoch.
    assert_relative_eq!(entry.slcd.unwrap(), 0.5, epsilon = 1e-12);
}

#[test]
fn seed_curves_average_before_comparison() {
    // Two seeds at 0.4 and 0.8 average to 0.6; the long budget runs at 0.6,
    // so the averaged curves coincide.
    let spec = constant_spec(1e-3);
    let records = vec![
        synthetic_record(spec, 1, 12, 0.4, 0.4),
        synthetic_record(spec, 2, 12, 0.8, 0.8),
        synthetic_record(spec, 1, 15, 0.6, 0.6),
    ];
    let report = analyze_sweep(&records).unwrap();
    let entry = &report.schedulers[0];
    assert!(entry.slcd.unwrap() < 1e-13, "{:?}", entry.slcd);
    assert_relative_eq!(entry.mean_endpoints[0], 0.6, epsilon = 1e-15);
}

#[test]
fn diverged_records_are_excluded_from_statistics() {
    let spec = constant_spec(1e-3);
    let mut diverged = synthetic_record(spec, 3, 12, 0.5, 10.0);
    diverged.diverged = true;
    diverged.lr_series.truncate(5);
    diverged.val_loss_series.truncate(5);

    let records = vec![
        synthetic_record(spec, 1, 12, 0.5, 0.5),
        diverged,
        synthetic_record(spec, 1, 15, 0.5, 0.5),
    ];
    let report = analyze_sweep(&records).unwrap();
    let entry = &report.schedulers[0];
    // The diverged seed does not drag the mean endpoint.
    assert_relative_eq!(entry.mean_endpoints[0], 0.5, epsilon = 1e-15);
    assert!(entry.slcd.unwrap() < 1e-13, "{:?}", entry.slcd);
}

#[test]
fn budgets_with_only_diverged_records_are_dropped() {
    let spec = constant_spec(1e-3);
    let mut dead = synthetic_record(spec, 1, 20, 0.5, 0.5);
    dead.diverged = true;
    dead.lr_series.truncate(3);
    dead.val_loss_series.truncate(3);

    let records = vec![
        synthetic_record(spec, 1, 12, 0.5, 0.5),
        synthetic_record(spec, 1, 15, 0.4, 0.4),
        dead,
    ];
    let report = analyze_sweep(&records).unwrap();
    assert_eq!(report.schedulers[0].budgets, vec![12, 15]);
}

#[test]
fn single_budget_groups_are_rejected() {
    let spec = constant_spec(1e-3);
    let records = vec![
        synthetic_record(spec, 1, 12, 0.5, 0.5),
        synthetic_record(spec, 2, 12, 0.6, 0.6),
    ];
    let err = analyze_sweep(&records).unwrap_err();
    assert!(
        matches!(err, ExperimentError::InsufficientBudgets { budgets: 1, .. }),
        "{err}"
    );

    assert!(analyze_sweep(&[]).is_err());
}

#[test]
fn duplicate_kinds_get_numbered_labels() {
    let records = vec![
        synthetic_record(constant_spec(1e-3), 1, 12, 0.5, 0.5),
        synthetic_record(constant_spec(1e-3), 1, 15, 0.5, 0.5),
        synthetic_record(constant_spec(2e-3), 1, 12, 0.7, 0.7),
        synthetic_record(constant_spec(2e-3), 1, 15, 0.7, 0.7),
        synthetic_record(
            ScheduleSpec::Exponential {
                eta_init: 1e-3,
                gamma: 0.95,
            },
            1,
            12,
            0.6,
            0.6,
        ),
        synthetic_record(
            ScheduleSpec::Exponential {
                eta_init: 1e-3,
                gamma: 0.95,
            },
            1,
            15,
            0.6,
            0.6,
        ),
    ];
    let report = analyze_sweep(&records).unwrap();
    let labels: Vec<&str> = report
        .schedulers
        .iter()
        .map(|s| s.label.as_str())
        .collect();
    assert_eq!(labels, vec!["constant", "constant#2", "exponential"]);
}

#[test]
fn analysis_is_pure_and_reports_are_byte_stable() {
    let spec = constant_spec(1e-3);
    let mut records = Vec::new();
    for &budget in &[10u32, 20, 40] {
        for seed in [1, 2, 3] {
            let end = 1.3 * f64::from(budget).powf(-0.8) + 0.01 * seed as f64;
            records.push(synthetic_record(spec, seed, budget, 2.0, end));
        }
    }
    let first = analyze_sweep(&records).unwrap();
    let second = analyze_sweep(&records).unwrap();
    assert_eq!(first.to_csv(), second.to_csv());
    assert_eq!(first.to_text(), second.to_text());

    let csv = first.to_csv();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "scheduler,budget,mean_endpoint,mu,sigma,B,R2,p,slcd"
    );
    // One row per (scheduler, budget).
    assert_eq!(csv.trim_end().lines().count(), 1 + 3);
    for line in lines {
        assert_eq!(line.split(',').count(), 9);
        assert!(line.starts_with("constant,"));
    }
}

#[test]
fn csv_leaves_unavailable_statistics_empty() {
    // Two budgets of 5 epochs: too short for the window-9 smoother and too
    // few budgets for a power fit, so B, R2, p, and slcd are all empty.
    let spec = constant_spec(1e-3);
    let records = vec![
        synthetic_record(spec, 1, 5, 0.5, 0.4),
        synthetic_record(spec, 1, 7, 0.5, 0.3),
    ];
    let report = analyze_sweep(&records).unwrap();
    assert!(report.schedulers[0].regression.is_none());
    assert_eq!(report.schedulers[0].slcd, None);

    let csv = report.to_csv();
    let row = csv.lines().nth(1).unwrap();
    let cells: Vec<&str> = row.split(',').collect();
    assert_eq!(&cells[5..9], &["", "", "", ""]);
}
