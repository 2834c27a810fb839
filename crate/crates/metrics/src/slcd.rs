use serde::{Deserialize, Serialize};

use crate::error::MetricsError;
use crate::smoothing::{smooth, LearningCurve, SmoothingSpec};

/// Smoothed learning curve difference plus the configuration that produced
/// it, so reported values are reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecouplingReport {
    /// Mean of |S(l1) - S(l2)| / (S(l1) + S(l2)) over the compared prefix:
    /// 0 for coupled curves, approaching 1 for fully decoupled ones.
    pub slcd: f64,
    pub smoothing: SmoothingSpec,
    pub compared_epochs: usize,
}

/// Normalized mean absolute difference between the smoothed curves over
/// their first min(len1, len2) epochs. Both full curves are smoothed first,
/// then the prefixes are compared.
pub fn slcd(
    l1: &LearningCurve,
    l2: &LearningCurve,
    spec: &SmoothingSpec,
) -> Result<DecouplingReport, MetricsError> {
    let s1 = smooth(l1, spec)?;
    let s2 = smooth(l2, spec)?;
    let n = s1.len().min(s2.len());
    let mut total = 0.0;
    for i in 0..n {
        let (a, b) = (s1.values[i], s2.values[i]);
        if a <= 0.0 || b <= 0.0 {
            return Err(MetricsError::NonPositiveSmoothed { index: i });
        }
        total += (a - b).abs() / (a + b);
    }
    Ok(DecouplingReport {
        slcd: total / n as f64,
        smoothing: *spec,
        compared_epochs: n,
    })
}
