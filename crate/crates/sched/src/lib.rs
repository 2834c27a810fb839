//! Closed-form learning-rate schedules.
//!
//! Six schedule families (constant, polynomial, cosine annealing,
//! exponential, hyperbolic, exp-hyperbolic) evaluated as pure functions of
//! the epoch index, plus a stateful stepper for training loops. Every value
//! comes from the closed form at the requested epoch; nothing accumulates,
//! so long schedules cannot drift.

mod error;
mod hyperbola;
mod spec;
mod stepper;

pub use error::ScheduleError;
pub use hyperbola::{exp_hyperbolic_value, h_curve, hyperbolic_value};
pub use spec::{EpochIndex, ScheduleSpec};
pub use stepper::{schedule_series, ScheduleStepper};
