//! Named scheduler presets.
//!
//! Each preset is the tuned hyperparameter set for one (model, schedule
//! family) pair from the reference experiments, tuned at a 200-epoch budget.
//! Epoch-dependent presets therefore carry `max_epoch = 199`; rebind with
//! [`ScheduleSpec::for_epochs`] before running any other budget.

use epochlab_sched::ScheduleSpec;

/// Reference tuning budget (200 epochs), as a final epoch index.
pub const PRESET_MAX_EPOCH: u32 = 199;

const N: u32 = PRESET_MAX_EPOCH;

/// Preset table, model-major. Names follow `{model}-{schedule}` with models
/// `cnn`, `lstm`, `deeponet`, `transformer-operator`.
pub const PRESETS: &[(&str, ScheduleSpec)] = &[
    (
        "cnn-constant",
        ScheduleSpec::Constant { eta_init: 6.15e-4 },
    ),
    (
        "cnn-polynomial",
        ScheduleSpec::Polynomial {
            eta_init: 7.92e-4,
            power: 0.7609,
            max_epoch: N,
        },
    ),
    (
        "cnn-cosine",
        ScheduleSpec::CosineAnnealing {
            eta_init: 1.06e-3,
            eta_min: 2.13e-5,
            max_epoch: N,
        },
    ),
    (
        "cnn-exponential",
        ScheduleSpec::Exponential {
            eta_init: 5.91e-4,
            gamma: 0.9894,
        },
    ),
    (
        "cnn-hyperbolic",
        ScheduleSpec::Hyperbolic {
            eta_init: 9.39e-4,
            eta_inf: 9.47e-6,
            max_epoch: N,
            upper_bound: 400,
        },
    ),
    (
        "cnn-exphyperbolic",
        ScheduleSpec::ExpHyperbolic {
            eta_init: 9.50e-4,
            eta_inf: 5.40e-5,
            max_epoch: N,
            upper_bound: 350,
        },
    ),
    (
        "lstm-constant",
        ScheduleSpec::Constant { eta_init: 1.05e-4 },
    ),
    (
        "lstm-polynomial",
        ScheduleSpec::Polynomial {
            eta_init: 3.96e-3,
            power: 1.2752,
            max_epoch: N,
        },
    ),
    (
        "lstm-cosine",
        ScheduleSpec::CosineAnnealing {
            eta_init: 3.00e-3,
            eta_min: 1.10e-7,
            max_epoch: N,
        },
    ),
    (
        "lstm-exponential",
        ScheduleSpec::Exponential {
            eta_init: 2.68e-3,
            gamma: 0.9392,
        },
    ),
    (
        "lstm-hyperbolic",
        ScheduleSpec::Hyperbolic {
            eta_init: 2.44e-3,
            eta_inf: 5.99e-6,
            max_epoch: N,
            upper_bound: 200,
        },
    ),
    (
        "lstm-exphyperbolic",
        ScheduleSpec::ExpHyperbolic {
            eta_init: 2.44e-3,
            eta_inf: 5.99e-6,
            max_epoch: N,
            upper_bound: 200,
        },
    ),
    (
        "deeponet-constant",
        ScheduleSpec::Constant { eta_init: 1.03e-3 },
    ),
    (
        "deeponet-polynomial",
        ScheduleSpec::Polynomial {
            eta_init: 4.13e-3,
            power: 1.2443,
            max_epoch: N,
        },
    ),
    (
        "deeponet-cosine",
        ScheduleSpec::CosineAnnealing {
            eta_init: 4.62e-3,
            eta_min: 2.66e-7,
            max_epoch: N,
        },
    ),
    (
        "deeponet-exponential",
        ScheduleSpec::Exponential {
            eta_init: 2.01e-3,
            gamma: 0.9598,
        },
    ),
    (
        "deeponet-hyperbolic",
        ScheduleSpec::Hyperbolic {
            eta_init: 4.62e-3,
            eta_inf: 2.66e-7,
            max_epoch: N,
            upper_bound: 250,
        },
    ),
    (
        "deeponet-exphyperbolic",
        ScheduleSpec::ExpHyperbolic {
            eta_init: 4.59e-3,
            eta_inf: 5.74e-7,
            max_epoch: N,
            upper_bound: 250,
        },
    ),
    (
        "transformer-operator-constant",
        ScheduleSpec::Constant { eta_init: 7.27e-4 },
    ),
    (
        "transformer-operator-polynomial",
        ScheduleSpec::Polynomial {
            eta_init: 7.36e-4,
            power: 0.5319,
            max_epoch: N,
        },
    ),
    (
        "transformer-operator-cosine",
        ScheduleSpec::CosineAnnealing {
            eta_init: 1.59e-3,
            eta_min: 2.61e-6,
            max_epoch: N,
        },
    ),
    (
        "transformer-operator-exponential",
        ScheduleSpec::Exponential {
            eta_init: 1.53e-3,
            gamma: 0.9649,
        },
    ),
    (
        "transformer-operator-hyperbolic",
        ScheduleSpec::Hyperbolic {
            eta_init: 2.55e-3,
            eta_inf: 1.69e-5,
            max_epoch: N,
            upper_bound: 250,
        },
    ),
    (
        "transformer-operator-exphyperbolic",
        ScheduleSpec::ExpHyperbolic {
            eta_init: 1.03e-3,
            eta_inf: 7.11e-5,
            max_epoch: N,
            upper_bound: 350,
        },
    ),
];

/// Looks up a preset by exact name.
pub fn preset(name: &str) -> Option<ScheduleSpec> {
    PRESETS
        .iter()
        .find(|(preset_name, _)| *preset_name == name)
        .map(|(_, spec)| *spec)
}

/// All preset names, table order.
pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(name, _)| *name).collect()
}
