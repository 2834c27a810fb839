use serde::{Deserialize, Serialize};

use crate::error::ScheduleError;
use crate::hyperbola::{exp_hyperbolic_value, hyperbolic_value};

/// Epoch counter. Schedules are per-epoch functions; there is no sub-epoch
/// granularity.
pub type EpochIndex = u32;

/// One of the six schedule families, with exactly the parameters that family
/// needs. `max_epoch` is N, the final evaluable epoch (total epochs minus
/// one); `upper_bound` is U, the largest admissible N for the hyperbolic
/// families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleSpec {
    Constant {
        eta_init: f64,
    },
    Polynomial {
        eta_init: f64,
        power: f64,
        max_epoch: u32,
    },
    CosineAnnealing {
        eta_init: f64,
        eta_min: f64,
        max_epoch: u32,
    },
    Exponential {
        eta_init: f64,
        gamma: f64,
    },
    Hyperbolic {
        eta_init: f64,
        eta_inf: f64,
        max_epoch: u32,
        upper_bound: u32,
    },
    ExpHyperbolic {
        eta_init: f64,
        eta_inf: f64,
        max_epoch: u32,
        upper_bound: u32,
    },
}

impl ScheduleSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ScheduleSpec::Constant { .. } => "constant",
            ScheduleSpec::Polynomial { .. } => "polynomial",
            ScheduleSpec::CosineAnnealing { .. } => "cosine_annealing",
            ScheduleSpec::Exponential { .. } => "exponential",
            ScheduleSpec::Hyperbolic { .. } => "hyperbolic",
            ScheduleSpec::ExpHyperbolic { .. } => "exp_hyperbolic",
        }
    }

    pub fn eta_init(&self) -> f64 {
        match *self {
            ScheduleSpec::Constant { eta_init }
            | ScheduleSpec::Polynomial { eta_init, .. }
            | ScheduleSpec::CosineAnnealing { eta_init, .. }
            | ScheduleSpec::Exponential { eta_init, .. }
            | ScheduleSpec::Hyperbolic { eta_init, .. }
            | ScheduleSpec::ExpHyperbolic { eta_init, .. } => eta_init,
        }
    }

    /// N for the families whose shape depends on the total epoch count.
    pub fn max_epoch(&self) -> Option<u32> {
        match *self {
            ScheduleSpec::Polynomial { max_epoch, .. }
            | ScheduleSpec::CosineAnnealing { max_epoch, .. }
            | ScheduleSpec::Hyperbolic { max_epoch, .. }
            | ScheduleSpec::ExpHyperbolic { max_epoch, .. } => Some(max_epoch),
            ScheduleSpec::Constant { .. } | ScheduleSpec::Exponential { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<(), ScheduleError> {
        let invalid = |msg: String| Err(ScheduleError::InvalidParameter(msg));
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(ScheduleError::InvalidParameter(format!(
                    "{name} must be finite and > 0, got {v}"
                )))
            }
        };
        match *self {
            ScheduleSpec::Constant { eta_init } => positive("eta_init", eta_init),
            ScheduleSpec::Polynomial {
                eta_init, power, ..
            } => {
                positive("eta_init", eta_init)?;
                positive("power", power)
            }
            ScheduleSpec::CosineAnnealing {
                eta_init, eta_min, ..
            } => {
                positive("eta_init", eta_init)?;
                if !eta_min.is_finite() || eta_min < 0.0 {
                    return invalid(format!("eta_min must be finite and >= 0, got {eta_min}"));
                }
                if eta_min > eta_init {
                    return invalid(format!(
                        "eta_min ({eta_min}) must not exceed eta_init ({eta_init})"
                    ));
                }
                Ok(())
            }
            ScheduleSpec::Exponential { eta_init, gamma } => {
                positive("eta_init", eta_init)?;
                if !gamma.is_finite() || gamma <= 0.0 || gamma >= 1.0 {
                    return invalid(format!("gamma must lie in (0, 1), got {gamma}"));
                }
                Ok(())
            }
            ScheduleSpec::Hyperbolic {
                eta_init,
                eta_inf,
                max_epoch,
                upper_bound,
            }
            | ScheduleSpec::ExpHyperbolic {
                eta_init,
                eta_inf,
                max_epoch,
                upper_bound,
            } => {
                positive("eta_init", eta_init)?;
                positive("eta_inf", eta_inf)?;
                if eta_inf >= eta_init {
                    return invalid(format!(
                        "eta_init ({eta_init}) must exceed eta_inf ({eta_inf})"
                    ));
                }
                if upper_bound == 0 {
                    return invalid("upper_bound must be >= 1".to_owned());
                }
                if max_epoch > upper_bound {
                    return invalid(format!(
                        "max_epoch ({max_epoch}) must not exceed upper_bound ({upper_bound})"
                    ));
                }
                Ok(())
            }
        }
    }

    /// Copy of the spec with N rebound to `epochs - 1` for the
    /// epoch-dependent families. The CLI and experiment layers only ever
    /// speak in epoch counts; this is the single place N is derived.
    pub fn for_epochs(&self, epochs: u32) -> Result<ScheduleSpec, ScheduleError> {
        if epochs == 0 {
            return Err(ScheduleError::InvalidParameter(
                "epoch count must be >= 1".to_owned(),
            ));
        }
        let n = epochs - 1;
        let mut spec = *self;
        match &mut spec {
            ScheduleSpec::Polynomial { max_epoch, .. }
            | ScheduleSpec::CosineAnnealing { max_epoch, .. }
            | ScheduleSpec::Hyperbolic { max_epoch, .. }
            | ScheduleSpec::ExpHyperbolic { max_epoch, .. } => *max_epoch = n,
            ScheduleSpec::Constant { .. } | ScheduleSpec::Exponential { .. } => {}
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Learning rate at epoch `n`. Errors past N for the epoch-dependent
    /// families; an N = 0 schedule degenerates to eta_init by continuity.
    pub fn eval(&self, n: EpochIndex) -> Result<f64, ScheduleError> {
        self.validate()?;
        if let Some(max_epoch) = self.max_epoch() {
            if n > max_epoch {
                return Err(ScheduleError::EpochOutOfRange {
                    epoch: n,
                    max_epoch,
                });
            }
            if max_epoch == 0 {
                return Ok(self.eta_init());
            }
        }
        match *self {
            ScheduleSpec::Constant { eta_init } => Ok(eta_init),
            ScheduleSpec::Polynomial {
                eta_init,
                power,
                max_epoch,
            } => {
                let frac = n as f64 / max_epoch as f64;
                Ok(eta_init * (1.0 - frac).powf(power))
            }
            ScheduleSpec::CosineAnnealing {
                eta_init,
                eta_min,
                max_epoch,
            } => {
                let angle = (n as f64 / max_epoch as f64) * std::f64::consts::PI;
                Ok(eta_min + 0.5 * (eta_init - eta_min) * (1.0 + angle.cos()))
            }
            ScheduleSpec::Exponential { eta_init, gamma } => Ok(eta_init * gamma.powf(n as f64)),
            ScheduleSpec::Hyperbolic {
                eta_init,
                eta_inf,
                max_epoch,
                upper_bound,
            } => hyperbolic_value(eta_init, eta_inf, n, max_epoch, upper_bound),
            ScheduleSpec::ExpHyperbolic {
                eta_init,
                eta_inf,
                max_epoch,
                upper_bound,
            } => exp_hyperbolic_value(eta_init, eta_inf, n, max_epoch, upper_bound),
        }
    }
}
