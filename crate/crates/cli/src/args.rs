use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "epochlab",
    version,
    about = "Learning-rate schedule laboratory: schedules, diagnostics, datasets, training sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit learning-rate series as epoch,lr CSV (and optional SVG chart)
    Schedule(ScheduleArgs),
    /// Tabulate the initial-phase learning-rate integral across budgets
    Ilri(IlriArgs),
    /// Generate a dataset and save it to a directory
    #[command(subcommand)]
    Dataset(DatasetCommand),
    /// Run a training sweep described by a JSON config file
    Experiment(ExperimentArgs),
    /// Analyze persisted run records into a per-scheduler report
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    /// Schedule family: constant | polynomial | cosine | exponential |
    /// hyperbolic | exphyperbolic
    #[arg(long, conflicts_with = "preset")]
    pub kind: Option<String>,

    /// Named preset (see `--list-presets`) instead of explicit parameters
    #[arg(long)]
    pub preset: Option<String>,

    /// Print all preset names and exit
    #[arg(long, default_value_t = false)]
    pub list_presets: bool,

    /// Initial learning rate (defaults to 1, the normalized scale)
    #[arg(long)]
    pub eta_init: Option<f64>,

    /// Asymptotic rate for the hyperbolic kinds
    #[arg(long)]
    pub eta_inf: Option<f64>,

    /// Floor rate for cosine annealing (defaults to 0)
    #[arg(long)]
    pub eta_min: Option<f64>,

    /// Exponent for the polynomial kind
    #[arg(long)]
    pub power: Option<f64>,

    /// Per-epoch decay factor for the exponential kind
    #[arg(long)]
    pub gamma: Option<f64>,

    /// Upper bound U on the maximum epoch for the hyperbolic kinds
    #[arg(long)]
    pub upper: Option<u32>,

    /// Comma-separated epoch budgets, one output curve per budget
    #[arg(long, default_value = "100")]
    pub epochs: String,

    /// Write one CSV per budget into this directory instead of stdout
    /// (required when more than one budget is given)
    #[arg(long)]
    pub out_dir: Option<PathBuf>,

    /// Also write a combined SVG line chart next to the CSVs
    #[arg(long, default_value_t = false)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct IlriArgs {
    /// Comma-separated schedule kinds to tabulate
    #[arg(long, default_value = "polynomial,cosine,hyperbolic,exphyperbolic")]
    pub kinds: String,

    /// Comma-separated epoch budgets; the largest is the baseline
    #[arg(long, default_value = "250,500,750,1000")]
    pub budgets: String,

    #[arg(long, default_value_t = 1.0)]
    pub eta_init: f64,

    #[arg(long, default_value_t = 1e-3)]
    pub eta_inf: f64,

    #[arg(long, default_value_t = 0.0)]
    pub eta_min: f64,

    #[arg(long, default_value_t = 0.5)]
    pub power: f64,

    #[arg(long, default_value_t = 0.97)]
    pub gamma: f64,

    #[arg(long, default_value_t = 1000)]
    pub upper: u32,
}

#[derive(Debug, Subcommand)]
pub enum DatasetCommand {
    /// Damped-oscillation history/horizon windows (train/validation split)
    Oscillation {
        #[arg(long, default_value_t = 89)]
        seed: u64,
        /// Output directory for the binary arrays and meta.json
        #[arg(long)]
        out: PathBuf,
    },
    /// Random-field functions paired with their cumulative integrals
    Operator {
        #[arg(long, default_value_t = 1000)]
        functions: usize,
        #[arg(long, default_value_t = 89)]
        seed: u64,
        /// Output directory for the binary arrays and meta.json
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// JSON experiment config (schema-checked; unknown keys rejected)
    #[arg(long)]
    pub config: PathBuf,

    /// Run-record directory (default: $EPOCHLAB_RUNS_DIR, then ./runs)
    #[arg(long)]
    pub runs_dir: Option<PathBuf>,

    /// Cap on parallel runs (default: one per core)
    #[arg(long)]
    pub jobs: Option<usize>,

    /// Print the planned run matrix without training or writing anything
    #[arg(long, default_value_t = false)]
    pub dry_run: bool,

    /// Swap the config's epoch budgets for the full-scale 50,100,150,200
    #[arg(long, default_value_t = false)]
    pub paper_scale: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Directory of run-record JSON files
    pub runs_dir: PathBuf,

    /// Also write the report as CSV to this path
    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// Also write an endpoint-vs-budget SVG chart to this path
    #[arg(long)]
    pub svg: Option<PathBuf>,
}
