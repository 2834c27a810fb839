use crate::error::ScheduleError;
use crate::spec::{EpochIndex, ScheduleSpec};

/// Materializes the first `epochs` learning rates, rebinding N to
/// `epochs - 1` for the epoch-dependent families.
pub fn schedule_series(
    spec: &ScheduleSpec,
    epochs: u32,
) -> Result<Vec<(EpochIndex, f64)>, ScheduleError> {
    let bound = spec.for_epochs(epochs)?;
    (0..epochs).map(|n| Ok((n, bound.eval(n)?))).collect()
}

/// Training-loop adapter over a validated spec. Each step recomputes the
/// learning rate from the closed form, so `current_lr` always equals
/// `spec.eval(current_epoch)` exactly.
#[derive(Debug, Clone)]
pub struct ScheduleStepper {
    spec: ScheduleSpec,
    current_epoch: EpochIndex,
    current_lr: f64,
}

impl ScheduleStepper {
    pub fn new(spec: ScheduleSpec) -> Result<Self, ScheduleError> {
        let current_lr = spec.eval(0)?;
        Ok(Self {
            spec,
            current_epoch: 0,
            current_lr,
        })
    }

    pub fn spec(&self) -> &ScheduleSpec {
        &self.spec
    }

    pub fn current_epoch(&self) -> EpochIndex {
        self.current_epoch
    }

    pub fn current_lr(&self) -> f64 {
        self.current_lr
    }

    /// Advances one epoch and returns the new learning rate. Stepping past N
    /// on an epoch-dependent family is an error; the schedule is simply not
    /// defined there.
    pub fn step(&mut self) -> Result<f64, ScheduleError> {
        let next = self
            .current_epoch
            .checked_add(1)
            .ok_or(ScheduleError::EpochOutOfRange {
                epoch: u32::MAX,
                max_epoch: u32::MAX,
            })?;
        let lr = self.spec.eval(next)?;
        self.current_epoch = next;
        self.current_lr = lr;
        Ok(lr)
    }
}
