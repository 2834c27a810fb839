use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::MetricsError;

/// Per-epoch series of one scalar training metric.
///
/// `new` enforces the training-curve contract (finite, strictly positive);
/// smoothing output is exempt because a least-squares fit may overshoot
/// below zero, and the curve-difference metric re-checks positivity where it
/// divides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningCurve {
    pub values: Vec<f64>,
    pub label: String,
}

impl LearningCurve {
    pub fn new(values: Vec<f64>, label: impl Into<String>) -> Result<Self, MetricsError> {
        if values.is_empty() {
            return Err(MetricsError::InvalidCurve("curve is empty".to_owned()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v <= 0.0) {
            return Err(MetricsError::InvalidCurve(format!(
                "curve values must be finite and > 0, got {bad}"
            )));
        }
        Ok(Self {
            values,
            label: label.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Smoothing operator applied to learning curves before comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SmoothingSpec {
    SavitzkyGolay { window: usize, poly_order: usize },
    ExponentialMovingAverage { alpha: f64 },
    Identity,
}

impl SmoothingSpec {
    /// The default used throughout reports: window 9, cubic fit.
    pub fn savitzky_golay_default() -> Self {
        SmoothingSpec::SavitzkyGolay {
            window: 9,
            poly_order: 3,
        }
    }

    pub fn validate(&self) -> Result<(), MetricsError> {
        match *self {
            SmoothingSpec::SavitzkyGolay { window, poly_order } => {
                if window % 2 == 0 {
                    return Err(MetricsError::InvalidSmoothing(format!(
                        "window must be odd, got {window}"
                    )));
                }
                if window < poly_order + 1 {
                    return Err(MetricsError::InvalidSmoothing(format!(
                        "window ({window}) must be >= poly_order + 1 ({})",
                        poly_order + 1
                    )));
                }
                Ok(())
            }
            SmoothingSpec::ExponentialMovingAverage { alpha } => {
                if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
                    return Err(MetricsError::InvalidSmoothing(format!(
                        "alpha must lie in (0, 1], got {alpha}"
                    )));
                }
                Ok(())
            }
            SmoothingSpec::Identity => Ok(()),
        }
    }
}

/// Applies the smoothing operator; output length equals input length.
///
/// Savitzky-Golay reproduces any polynomial of degree <= poly_order exactly,
/// including at the ends: boundary outputs come from evaluating the
/// least-squares fit of the first/last window at the off-center positions
/// (not from mirror padding, which breaks polynomial reproduction there).
pub fn smooth(curve: &LearningCurve, spec: &SmoothingSpec) -> Result<LearningCurve, MetricsError> {
    spec.validate()?;
    let values = match *spec {
        SmoothingSpec::Identity => curve.values.clone(),
        SmoothingSpec::ExponentialMovingAverage { alpha } => {
            let mut out = Vec::with_capacity(curve.len());
            let mut acc = curve.values[0];
            out.push(acc);
            for v in &curve.values[1..] {
                acc = alpha * v + (1.0 - alpha) * acc;
                out.push(acc);
            }
            out
        }
        SmoothingSpec::SavitzkyGolay { window, poly_order } => {
            savitzky_golay(&curve.values, window, poly_order)?
        }
    };
    Ok(LearningCurve {
        values,
        label: curve.label.clone(),
    })
}

/// Projection of a window onto polynomials of degree <= poly_order: rows are
/// the output weights for each in-window position.
fn projection_matrix(window: usize, poly_order: usize) -> DMatrix<f64> {
    let half = (window / 2) as isize;
    let cols = poly_order + 1;
    let vander = DMatrix::from_fn(window, cols, |i, j| {
        let x = (i as isize - half) as f64;
        x.powi(j as i32)
    });
    let vtv = vander.transpose() * &vander;
    let solved = vtv
        .cholesky()
        .expect("Vandermonde normal matrix is positive definite for window >= order + 1")
        .solve(&vander.transpose());
    &vander * solved
}

fn savitzky_golay(
    values: &[f64],
    window: usize,
    poly_order: usize,
) -> Result<Vec<f64>, MetricsError> {
    let len = values.len();
    if len < window {
        return Err(MetricsError::CurveTooShort { len, window });
    }
    let half = window / 2;
    let proj = projection_matrix(window, poly_order);
    let weighted = |row: usize, chunk: &[f64]| -> f64 {
        proj.row(row)
            .iter()
            .zip(chunk)
            .map(|(w, v)| w * v)
            .sum::<f64>()
    };

    let mut out = vec![0.0; len];
    for (i, slot) in out.iter_mut().enumerate().take(half) {
        *slot = weighted(i, &values[..window]);
    }
    for i in half..len - half {
        out[i] = weighted(half, &values[i - half..i + half + 1]);
    }
    for (i, slot) in out.iter_mut().enumerate().skip(len - half) {
        *slot = weighted(window - (len - i), &values[len - window..]);
    }
    Ok(out)
}
