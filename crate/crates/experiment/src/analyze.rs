use std::fmt::Write as _;

use epochlab_metrics::{
    improvement_stats, power_regression, slcd, ImprovementStats, LearningCurve, PowerRegression,
    SmoothingSpec,
};
use epochlab_sched::ScheduleSpec;

use crate::error::ExperimentError;
use crate::record::RunRecord;

/// Smoothing applied to the compared curves: Savitzky-Golay, window 9,
/// cubic.
pub const REPORT_SMOOTHING: SmoothingSpec = SmoothingSpec::SavitzkyGolay {
    window: 9,
    poly_order: 3,
};

/// Per-scheduler slice of the sweep analysis.
#[derive(Debug, Clone)]
pub struct SchedulerReport {
    /// Schedule kind name, suffixed `#2`, `#3`, ... when several schedulers
    /// of the same kind appear in one sweep.
    pub label: String,
    pub scheduler: ScheduleSpec,
    /// Budgets that kept at least one non-diverged record, ascending.
    pub budgets: Vec<u32>,
    /// Final validation loss per budget, averaged over non-diverged seeds.
    pub mean_endpoints: Vec<f64>,
    /// Per-interval improvement of the mean endpoint across budgets.
    pub improvement: ImprovementStats,
    /// Power fit endpoint = exp(a) * budget^b; needs >= 3 budgets.
    pub regression: Option<PowerRegression>,
    /// Decoupling between the seed-averaged curves of the smallest and
    /// largest budgets; None when a curve is too short to smooth or a
    /// smoothed curve leaves the positive domain.
    pub slcd: Option<f64>,
}

/// Sweep-level analysis, one entry per distinct scheduler spec.
#[derive(Debug, Clone)]
pub struct SweepReport {
    /// How the compared statistics were formed, recorded so the report is
    /// self-describing.
    pub curve_note: String,
    pub schedulers: Vec<SchedulerReport>,
}

/// Elementwise mean of equal-length curves.
fn mean_curve(curves: &[&[f64]]) -> Vec<f64> {
    let len = curves[0].len();
    let mut out = vec![0.0; len];
    for curve in curves {
        for (acc, v) in out.iter_mut().zip(curve.iter()) {
            *acc += v;
        }
    }
    let scale = curves.len() as f64;
    for v in &mut out {
        *v /= scale;
    }
    out
}

fn budget_slcd(
    label: &str,
    min_budget: u32,
    max_budget: u32,
    min_curve: Vec<f64>,
    max_curve: Vec<f64>,
) -> Option<f64> {
    let short = LearningCurve::new(min_curve, format!("{label}-b{min_budget}")).ok()?;
    let long = LearningCurve::new(max_curve, format!("{label}-b{max_budget}")).ok()?;
    slcd(&short, &long, &REPORT_SMOOTHING).ok().map(|r| r.slcd)
}

/// Groups records by scheduler spec and reduces each group to the report
/// statistics. Pure over the record set: the same records always yield the
/// same report, byte for byte.
///
/// Diverged records are excluded from every statistic; a budget with no
/// surviving records is dropped. Each scheduler must keep at least two
/// budgets.
pub fn analyze_sweep(records: &[RunRecord]) -> Result<SweepReport, ExperimentError> {
    if records.is_empty() {
        return Err(ExperimentError::Config(
            "cannot analyze an empty record set".to_owned(),
        ));
    }

    // Group on the serialized spec; first-appearance order keeps the report
    // deterministic without imposing an ordering on specs.
    let mut groups: Vec<(String, ScheduleSpec, Vec<&RunRecord>)> = Vec::new();
    for record in records {
        let key = serde_json::to_string(&record.scheduler)?;
        match groups.iter_mut().find(|(k, _, _)| *k == key) {
            Some((_, _, members)) => members.push(record),
            None => groups.push((key, record.scheduler, vec![record])),
        }
    }

    let mut labels = Vec::with_capacity(groups.len());
    for (index, (_, spec, _)) in groups.iter().enumerate() {
        let kind = spec.kind_name();
        let occurrence = groups[..index]
            .iter()
            .filter(|(_, prior, _)| prior.kind_name() == kind)
            .count();
        labels.push(if occurrence == 0 {
            kind.to_owned()
        } else {
            format!("{kind}#{}", occurrence + 1)
        });
    }

    let mut schedulers = Vec::with_capacity(groups.len());
    for ((_, spec, members), label) in groups.into_iter().zip(labels) {
        let mut budgets: Vec<u32> = members.iter().map(|r| r.epoch_budget).collect();
        budgets.sort_unstable();
        budgets.dedup();

        let mut kept_budgets = Vec::new();
        let mut mean_endpoints = Vec::new();
        let mut mean_curves: Vec<Vec<f64>> = Vec::new();
        for &budget in &budgets {
            let survivors: Vec<&[f64]> = members
                .iter()
                .filter(|r| r.epoch_budget == budget && !r.diverged)
                .map(|r| r.val_loss_series.as_slice())
                .collect();
            if survivors.is_empty() {
                continue;
            }
            let curve = mean_curve(&survivors);
            mean_endpoints.push(*curve.last().expect("non-diverged curves are non-empty"));
            mean_curves.push(curve);
            kept_budgets.push(budget);
        }
        if kept_budgets.len() < 2 {
            return Err(ExperimentError::InsufficientBudgets {
                label,
                budgets: kept_budgets.len(),
            });
        }

        let improvement =
            improvement_stats(&mean_endpoints, false, kept_budgets[1] - kept_budgets[0])?;
        let regression = if kept_budgets.len() >= 3 {
            let xs: Vec<f64> = kept_budgets.iter().map(|&b| f64::from(b)).collect();
            Some(power_regression(&xs, &mean_endpoints)?)
        } else {
            None
        };
        let slcd_value = budget_slcd(
            &label,
            kept_budgets[0],
            *kept_budgets.last().expect("at least two budgets"),
            mean_curves.first().expect("at least two curves").clone(),
            mean_curves.last().expect("at least two curves").clone(),
        );

        schedulers.push(SchedulerReport {
            label,
            scheduler: spec,
            budgets: kept_budgets,
            mean_endpoints,
            improvement,
            regression,
            slcd: slcd_value,
        });
    }

    Ok(SweepReport {
        curve_note: "endpoint = final validation loss, averaged over non-diverged seeds; \
                     slcd compares the seed-averaged curves of the smallest and largest \
                     budgets after Savitzky-Golay smoothing (window 9, order 3)"
            .to_owned(),
        schedulers,
    })
}

fn csv_opt(value: Option<f64>) -> String {
    value.map(|v| format!("{v:e}")).unwrap_or_default()
}

impl SweepReport {
    /// One row per (scheduler, budget); scheduler-level statistics repeat on
    /// each of that scheduler's rows. Missing statistics leave their cell
    /// empty. Floats are exponent-formatted so every magnitude round-trips.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scheduler,budget,mean_endpoint,mu,sigma,B,R2,p,slcd\n");
        for report in &self.schedulers {
            for (budget, endpoint) in report.budgets.iter().zip(&report.mean_endpoints) {
                let _ = writeln!(
                    out,
                    "{},{},{:e},{:e},{:e},{},{},{},{}",
                    report.label,
                    budget,
                    endpoint,
                    report.improvement.mean_pct,
                    report.improvement.std_pct,
                    csv_opt(report.regression.as_ref().map(|r| r.b)),
                    csv_opt(report.regression.as_ref().map(|r| r.r_squared)),
                    csv_opt(report.regression.as_ref().map(|r| r.p_value)),
                    csv_opt(report.slcd),
                );
            }
        }
        out
    }

    /// Fixed-width table with one row per scheduler, endpoints listed across
    /// budgets.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.curve_note);
        let _ = writeln!(
            out,
            "{:<18} {:>8} {:>14} {:>9} {:>9} {:>9} {:>7} {:>10} {:>8}",
            "scheduler", "budget", "endpoint", "mu%", "sigma%", "B", "R2", "p", "slcd"
        );
        for report in &self.schedulers {
            for (index, (budget, endpoint)) in report
                .budgets
                .iter()
                .zip(&report.mean_endpoints)
                .enumerate()
            {
                let (mu, sigma, b, r2, p, slcd_text) = if index == 0 {
                    (
                        format!("{:.2}", report.improvement.mean_pct),
                        format!("{:.2}", report.improvement.std_pct),
                        report
                            .regression
                            .as_ref()
                            .map_or(String::new(), |r| format!("{:.4}", r.b)),
                        report
                            .regression
                            .as_ref()
                            .map_or(String::new(), |r| format!("{:.4}", r.r_squared)),
                        report
                            .regression
                            .as_ref()
                            .map_or(String::new(), |r| format!("{:.2e}", r.p_value)),
                        report
                            .slcd
                            .map_or(String::new(), |v| format!("{v:.4}")),
                    )
                } else {
                    Default::default()
                };
                let _ = writeln!(
                    out,
                    "{:<18} {:>8} {:>14.6e} {:>9} {:>9} {:>9} {:>7} {:>10} {:>8}",
                    report.label, budget, endpoint, mu, sigma, b, r2, p, slcd_text
                );
            }
        }
        out
    }
}
