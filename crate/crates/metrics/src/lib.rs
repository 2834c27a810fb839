//! Learning-curve diagnostics.
//!
//! Two curve-level metrics (smoothed learning curve difference, initial
//! learning rate integral) plus the evaluation-protocol statistics (power
//! regression over epoch budgets, interval improvement stats). Everything is
//! pure and dependency-light; the only linear algebra is the small
//! least-squares projection behind Savitzky-Golay smoothing.

mod error;
mod ilri;
mod regression;
mod slcd;
mod smoothing;
mod special;

pub use error::MetricsError;
pub use ilri::{ilri, CubicHermite, IlriResult};
pub use regression::{
    improvement_stats, power_regression, student_t_two_sided_p, ImprovementStats, PowerRegression,
};
pub use slcd::{slcd, DecouplingReport};
pub use smoothing::{smooth, LearningCurve, SmoothingSpec};
