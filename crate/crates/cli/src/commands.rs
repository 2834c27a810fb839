use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use epochlab_datasets::io::{save_operator_dataset, save_windowed_pair};
use epochlab_datasets::{grf_sample, oscillation_build, GrfSpec};
use epochlab_experiment::{
    analyze_sweep, load_record, preset, preset_names, run_fingerprint, run_sweep,
    ExperimentConfig, ModelSpec, RunRecord, SweepReport,
};
use epochlab_metrics::{ilri, MetricsError};
use epochlab_nn::paper_deeponet_spec;
use epochlab_sched::{schedule_series, ScheduleSpec};

use crate::args::{
    AnalyzeArgs, DatasetCommand, ExperimentArgs, IlriArgs, ScheduleArgs,
};
use crate::chart::svg_line_chart;
use crate::error::CliError;

/// Environment variable overriding the default run-record directory.
pub const RUNS_DIR_ENV: &str = "EPOCHLAB_RUNS_DIR";

/// Full-scale epoch budgets selected by `--paper-scale`.
pub const PAPER_SCALE_BUDGETS: [u32; 4] = [50, 100, 150, 200];

fn parse_u32_list(text: &str, what: &str) -> Result<Vec<u32>, CliError> {
    let values: Result<Vec<u32>, _> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect();
    let values =
        values.map_err(|e| CliError::usage(format!("cannot parse {what} {text:?}: {e}")))?;
    if values.is_empty() {
        return Err(CliError::usage(format!("{what} list is empty")));
    }
    Ok(values)
}

/// Parameter pool the schedule builders draw from; each kind takes what it
/// needs and reports what is missing.
struct ScheduleParams {
    eta_init: Option<f64>,
    eta_inf: Option<f64>,
    eta_min: Option<f64>,
    power: Option<f64>,
    gamma: Option<f64>,
    upper: Option<u32>,
}

fn build_schedule_spec(kind: &str, params: &ScheduleParams) -> Result<ScheduleSpec, CliError> {
    let need = |name: &str, value: Option<f64>| {
        value.ok_or_else(|| CliError::usage(format!("--{name} is required for kind {kind:?}")))
    };
    // max_epoch is a placeholder; every consumer rebinds it per budget.
    let spec = match kind {
        "constant" => ScheduleSpec::Constant {
            eta_init: need("eta-init", params.eta_init)?,
        },
        "polynomial" => ScheduleSpec::Polynomial {
            eta_init: need("eta-init", params.eta_init)?,
            power: need("power", params.power)?,
            max_epoch: 0,
        },
        "cosine" => ScheduleSpec::CosineAnnealing {
            eta_init: need("eta-init", params.eta_init)?,
            eta_min: params.eta_min.unwrap_or(0.0),
            max_epoch: 0,
        },
        "exponential" => ScheduleSpec::Exponential {
            eta_init: need("eta-init", params.eta_init)?,
            gamma: need("gamma", params.gamma)?,
        },
        "hyperbolic" | "exphyperbolic" => {
            let eta_init = need("eta-init", params.eta_init)?;
            let eta_inf = need("eta-inf", params.eta_inf)?;
            let upper = params.upper.ok_or_else(|| {
                CliError::usage(format!("--upper is required for kind {kind:?}"))
            })?;
            if kind == "hyperbolic" {
                ScheduleSpec::Hyperbolic {
                    eta_init,
                    eta_inf,
                    max_epoch: 0,
                    upper_bound: upper,
                }
            } else {
                ScheduleSpec::ExpHyperbolic {
                    eta_init,
                    eta_inf,
                    max_epoch: 0,
                    upper_bound: upper,
                }
            }
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown schedule kind {other:?}; expected constant, polynomial, cosine, \
                 exponential, hyperbolic, or exphyperbolic"
            )));
        }
    };
    Ok(spec)
}

fn series_csv(series: &[(u32, f64)]) -> String {
    let mut csv = String::from("epoch,lr\n");
    for (epoch, lr) in series {
        let _ = writeln!(csv, "{epoch},{lr:.16e}");
    }
    csv
}

pub fn cmd_schedule(args: &ScheduleArgs) -> Result<String, CliError> {
    if args.list_presets {
        let mut out = String::new();
        for name in preset_names() {
            let _ = writeln!(out, "{name}");
        }
        return Ok(out);
    }

    let (label, spec) = if let Some(name) = &args.preset {
        let spec = preset(name).ok_or_else(|| {
            CliError::usage(format!(
                "unknown preset {name:?}; run with --list-presets to see the choices"
            ))
        })?;
        (name.clone(), spec)
    } else if let Some(kind) = &args.kind {
        let params = ScheduleParams {
            // The normalized scale: schedule shapes are budget comparisons,
            // so an unstated initial rate means "relative to 1".
            eta_init: args.eta_init.or(Some(1.0)),
            eta_inf: args.eta_inf,
            eta_min: args.eta_min,
            power: args.power,
            gamma: args.gamma,
            upper: args.upper,
        };
        (kind.clone(), build_schedule_spec(kind, &params)?)
    } else {
        return Err(CliError::usage(
            "one of --kind or --preset is required".to_owned(),
        ));
    };

    let budgets = parse_u32_list(&args.epochs, "--epochs")?;
    let mut outputs = Vec::with_capacity(budgets.len());
    for &budget in &budgets {
        // Parameter combinations the schedule cannot express (N > U, zero
        // epochs) are invocation mistakes, not runtime faults.
        let series =
            schedule_series(&spec, budget).map_err(|e| CliError::usage(e.to_string()))?;
        outputs.push((budget, series));
    }

    match &args.out_dir {
        None => {
            if outputs.len() > 1 {
                return Err(CliError::usage(
                    "multiple budgets need --out-dir (one CSV file per budget)".to_owned(),
                ));
            }
            if args.svg {
                return Err(CliError::usage("--svg needs --out-dir".to_owned()));
            }
            Ok(series_csv(&outputs[0].1))
        }
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let mut report = String::new();
            for (budget, series) in &outputs {
                let path = dir.join(format!("schedule-{label}-{budget}ep.csv"));
                fs::write(&path, series_csv(series))?;
                let _ = writeln!(report, "wrote {}", path.display());
            }
            if args.svg {
                let chart_series: Vec<(String, Vec<(f64, f64)>)> = outputs
                    .iter()
                    .map(|(budget, series)| {
                        (
                            format!("{budget} epochs"),
                            series
                                .iter()
                                .map(|(n, lr)| (f64::from(*n), *lr))
                                .collect(),
                        )
                    })
                    .collect();
                let svg = svg_line_chart(
                    &format!("{label} learning-rate schedule"),
                    "epoch",
                    "learning rate",
                    &chart_series,
                );
                let path = dir.join(format!("schedule-{label}.svg"));
                fs::write(&path, svg)?;
                let _ = writeln!(report, "wrote {}", path.display());
            }
            Ok(report)
        }
    }
}

/// One ILRI table entry. `ilri` is None when the schedule never drops to
/// 80% of its initial rate within the budget.
#[derive(Debug, Clone)]
pub struct IlriRow {
    pub kind: String,
    pub budget: u32,
    pub ilri: Option<f64>,
    /// Percentage reduction relative to the baseline (largest) budget.
    pub pct_vs_baseline: Option<f64>,
}

pub fn ilri_rows(args: &IlriArgs) -> Result<Vec<IlriRow>, CliError> {
    let budgets = parse_u32_list(&args.budgets, "--budgets")?;
    let baseline_budget = *budgets
        .iter()
        .max()
        .expect("parse_u32_list rejects empty lists");
    let params = ScheduleParams {
        eta_init: Some(args.eta_init),
        eta_inf: Some(args.eta_inf),
        eta_min: Some(args.eta_min),
        power: Some(args.power),
        gamma: Some(args.gamma),
        upper: Some(args.upper),
    };

    let mut rows = Vec::new();
    for kind in args.kinds.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let spec = build_schedule_spec(kind, &params)?;
        let mut values = Vec::with_capacity(budgets.len());
        for &budget in &budgets {
            let series =
                schedule_series(&spec, budget).map_err(|e| CliError::usage(e.to_string()))?;
            let points: Vec<(f64, f64)> = series
                .iter()
                .map(|(n, lr)| (f64::from(*n), *lr))
                .collect();
            let value = match ilri(&points) {
                Ok(result) => Some(result.ilri),
                Err(MetricsError::NoCrossing) => None,
                Err(e) => return Err(CliError::runtime(e.to_string())),
            };
            values.push((budget, value));
        }
        let baseline = values
            .iter()
            .find(|(budget, _)| *budget == baseline_budget)
            .and_then(|(_, v)| *v);
        for (budget, value) in values {
            let pct = match (value, baseline) {
                (Some(v), Some(b)) => Some((1.0 - v / b) * 100.0),
                _ => None,
            };
            rows.push(IlriRow {
                kind: kind.to_owned(),
                budget,
                ilri: value,
                pct_vs_baseline: pct,
            });
        }
    }
    Ok(rows)
}

pub fn cmd_ilri(args: &IlriArgs) -> Result<String, CliError> {
    let rows = ilri_rows(args)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<16} {:>8} {:>14} {:>12}",
        "kind", "budget", "ilri", "diff_vs_base"
    );
    for row in &rows {
        let ilri_text = row
            .ilri
            .map_or_else(|| "no crossing".to_owned(), |v| format!("{v:.4}"));
        let pct_text = row
            .pct_vs_baseline
            .map_or_else(|| "-".to_owned(), |v| format!("{v:.2}%"));
        let _ = writeln!(
            out,
            "{:<16} {:>8} {:>14} {:>12}",
            row.kind, row.budget, ilri_text, pct_text
        );
    }
    Ok(out)
}

pub fn cmd_dataset(command: &DatasetCommand) -> Result<String, CliError> {
    match command {
        DatasetCommand::Oscillation { seed, out } => {
            let (train, validation) = oscillation_build(*seed)?;
            save_windowed_pair(out, &train, &validation, *seed)?;
            Ok(format!(
                "saved {} train / {} validation pairs ({} total) to {}\n",
                train.len(),
                validation.len(),
                train.len() + validation.len(),
                out.display()
            ))
        }
        DatasetCommand::Operator {
            functions,
            seed,
            out,
        } => {
            let spec = GrfSpec::with_function_count(*functions);
            let dataset = grf_sample(&spec, *seed)?;
            save_operator_dataset(out, &dataset, &spec)?;
            Ok(format!(
                "saved {} functions on a {}-point grid to {}\n",
                dataset.len(),
                spec.sensor_count,
                out.display()
            ))
        }
    }
}

/// Appends every key present in `input` but absent from `canonical` (the
/// config re-serialized), walking objects and equal-length arrays. The
/// canonical form contains exactly the accepted fields, so anything extra
/// in the input is an unknown key.
fn collect_unknown_keys(
    input: &serde_json::Value,
    canonical: &serde_json::Value,
    path: &str,
    unknown: &mut Vec<String>,
) {
    use serde_json::Value;
    match (input, canonical) {
        (Value::Object(input_map), Value::Object(canonical_map)) => {
            for (key, value) in input_map {
                let child = format!("{path}/{key}");
                match canonical_map.get(key) {
                    Some(canonical_value) => {
                        collect_unknown_keys(value, canonical_value, &child, unknown)
                    }
                    None => unknown.push(child),
                }
            }
        }
        (Value::Array(input_items), Value::Array(canonical_items))
            if input_items.len() == canonical_items.len() =>
        {
            for (index, (value, canonical_value)) in
                input_items.iter().zip(canonical_items).enumerate()
            {
                let child = format!("{path}/{index}");
                collect_unknown_keys(value, canonical_value, &child, unknown);
            }
        }
        _ => {}
    }
}

/// Parses and schema-checks an experiment config file. Unknown keys are
/// rejected at every nesting level.
pub fn load_experiment_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::runtime(format!("cannot read {}: {e}", path.display())))?;
    let raw: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::runtime(format!("{} is not valid JSON: {e}", path.display())))?;
    let config: ExperimentConfig = serde_json::from_value(raw.clone())
        .map_err(|e| CliError::runtime(format!("{} schema: {e}", path.display())))?;
    let canonical = serde_json::to_value(&config)
        .map_err(|e| CliError::runtime(format!("config reserialization: {e}")))?;
    let mut unknown = Vec::new();
    collect_unknown_keys(&raw, &canonical, "", &mut unknown);
    if !unknown.is_empty() {
        return Err(CliError::runtime(format!(
            "{} has unknown keys: {}",
            path.display(),
            unknown.join(", ")
        )));
    }
    Ok(config)
}

/// Resolves the run-record directory: flag, then $EPOCHLAB_RUNS_DIR, then
/// ./runs.
pub fn resolve_runs_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    if let Some(env_dir) = std::env::var_os(RUNS_DIR_ENV) {
        if !env_dir.is_empty() {
            return PathBuf::from(env_dir);
        }
    }
    PathBuf::from("runs")
}

pub fn cmd_experiment(args: &ExperimentArgs) -> Result<String, CliError> {
    let mut config = load_experiment_config(&args.config)?;
    if args.paper_scale {
        config.epoch_budgets = PAPER_SCALE_BUDGETS.to_vec();
        // Full scale also means the full-size operator network; the sensor
        // count and init seed carry over from the configured model.
        if let ModelSpec::DeepOnet { spec } = &config.model {
            let sensors = spec.branch.layer_widths[0];
            config.model = ModelSpec::DeepOnet {
                spec: paper_deeponet_spec(sensors, spec.branch.init_seed),
            };
        }
    }
    config.validate().map_err(CliError::from)?;
    let runs_dir = resolve_runs_dir(args.runs_dir.as_deref());

    if args.dry_run {
        let mut out = String::new();
        let mut total = 0usize;
        for (index, scheduler) in config.scheduler_specs.iter().enumerate() {
            for &budget in &config.epoch_budgets {
                for &seed in &config.seeds {
                    let fingerprint = run_fingerprint(&config, scheduler, seed, budget);
                    let exists = runs_dir.join(format!("{fingerprint}.json")).exists();
                    let _ = writeln!(
                        out,
                        "scheduler={index}:{} budget={budget} seed={seed} fingerprint={fingerprint}{}",
                        scheduler.kind_name(),
                        if exists { " (record exists)" } else { "" },
                    );
                    total += 1;
                }
            }
        }
        let _ = writeln!(out, "planned {total} runs (dry run, nothing written)");
        return Ok(out);
    }

    let sweep = || run_sweep(&config, &runs_dir);
    let outcome = match args.jobs {
        None => sweep()?,
        Some(jobs) => {
            if jobs == 0 {
                return Err(CliError::usage("--jobs must be >= 1".to_owned()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| CliError::runtime(e.to_string()))?;
            pool.install(sweep)?
        }
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "sweep complete: {} records in {}",
        outcome.records.len(),
        runs_dir.display()
    );
    if outcome.failures.is_empty() {
        Ok(out)
    } else {
        let mut msg = format!(
            "{} of {} runs failed (completed records were kept):\n",
            outcome.failures.len(),
            outcome.records.len() + outcome.failures.len()
        );
        for failure in &outcome.failures {
            let _ = writeln!(
                msg,
                "  scheduler={} budget={} seed={}: {}",
                failure.scheduler_index, failure.epoch_budget, failure.seed, failure.error
            );
        }
        Err(CliError::runtime(msg))
    }
}

/// Loads every `*.json` run record under `dir`, ordered by scheduler spec,
/// budget, then seed so reports do not depend on directory iteration order.
pub fn load_records_from_dir(dir: &Path) -> Result<Vec<RunRecord>, CliError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::runtime(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    let mut records = Vec::with_capacity(paths.len());
    for path in paths {
        records.push(load_record(&path)?);
    }
    if records.is_empty() {
        return Err(CliError::runtime(format!(
            "no run records found in {}",
            dir.display()
        )));
    }
    records.sort_by(|a, b| {
        let key = |r: &RunRecord| {
            (
                serde_json::to_string(&r.scheduler).expect("schedule specs serialize"),
                r.epoch_budget,
                r.seed,
            )
        };
        key(a).cmp(&key(b))
    });
    Ok(records)
}

fn endpoint_chart(report: &SweepReport) -> String {
    let series: Vec<(String, Vec<(f64, f64)>)> = report
        .schedulers
        .iter()
        .map(|s| {
            (
                s.label.clone(),
                s.budgets
                    .iter()
                    .zip(&s.mean_endpoints)
                    .map(|(b, e)| (f64::from(*b), *e))
                    .collect(),
            )
        })
        .collect();
    svg_line_chart(
        "mean final validation loss vs epoch budget",
        "epoch budget",
        "validation loss",
        &series,
    )
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<String, CliError> {
    let records = load_records_from_dir(&args.runs_dir)?;
    let report = analyze_sweep(&records)?;
    if let Some(path) = &args.csv {
        fs::write(path, report.to_csv())?;
    }
    if let Some(path) = &args.svg {
        fs::write(path, endpoint_chart(&report))?;
    }
    Ok(report.to_text())
}
