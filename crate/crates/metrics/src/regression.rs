use serde::{Deserialize, Serialize};

use crate::error::MetricsError;
use crate::special::regularized_incomplete_beta;

/// Least-squares fit of y = exp(A) * x^B in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerRegression {
    /// Intercept of the log-log fit (the model coefficient is exp(A)).
    pub a: f64,
    /// Exponent.
    pub b: f64,
    pub r_squared: f64,
    /// Two-sided t-test on the slope, (count - 2) degrees of freedom. Exact
    /// fits degenerate to 0, a perfectly flat fit to 1.
    pub p_value: f64,
}

/// Mean/population-std of relative improvements between consecutive epoch
/// budgets, in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImprovementStats {
    pub mean_pct: f64,
    pub std_pct: f64,
    /// Gap between the consecutive budgets the improvements span.
    pub interval: u32,
}

/// Two-sided p-value of a t statistic: I_{nu/(nu + t^2)}(nu/2, 1/2).
pub fn student_t_two_sided_p(t: f64, dof: u32) -> f64 {
    assert!(dof >= 1, "t-test needs at least one degree of freedom");
    let nu = dof as f64;
    regularized_incomplete_beta(nu / 2.0, 0.5, nu / (nu + t * t))
}

pub fn power_regression(xs: &[f64], ys: &[f64]) -> Result<PowerRegression, MetricsError> {
    if xs.len() != ys.len() {
        return Err(MetricsError::InvalidInput(format!(
            "point count mismatch: {} xs vs {} ys",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(MetricsError::InvalidInput(format!(
            "need at least 3 points, got {}",
            xs.len()
        )));
    }
    if xs
        .iter()
        .chain(ys)
        .any(|v| !v.is_finite() || *v <= 0.0)
    {
        return Err(MetricsError::InvalidInput(
            "all coordinates must be finite and > 0".to_owned(),
        ));
    }

    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;

    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(MetricsError::UndefinedSlope);
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;

    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let r = y - (a + b * x);
            r * r
        })
        .sum();
    let ss_tot: f64 = ly.iter().map(|y| (y - my) * (y - my)).sum();
    let r_squared = if ss_tot == 0.0 {
        0.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };

    let dof = xs.len() as u32 - 2;
    let se = (ss_res / dof as f64 / sxx).sqrt();
    let p_value = if se == 0.0 {
        // Residual-free fit: an exact slope leaves no sampling uncertainty,
        // an exactly flat one no evidence against zero slope.
        if b == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        student_t_two_sided_p(b / se, dof)
    };

    Ok(PowerRegression {
        a,
        b,
        r_squared,
        p_value,
    })
}

/// Relative improvements between consecutive endpoint values, in percent.
/// For losses (higher_is_better = false) an improvement is a drop:
/// (prev - cur)/prev * 100; for accuracy-like metrics it is a rise:
/// (cur - prev)/prev * 100.
pub fn improvement_stats(
    curve_endpoints: &[f64],
    higher_is_better: bool,
    interval: u32,
) -> Result<ImprovementStats, MetricsError> {
    if curve_endpoints.len() < 2 {
        return Err(MetricsError::InvalidInput(format!(
            "need at least 2 endpoint values, got {}",
            curve_endpoints.len()
        )));
    }
    if interval == 0 {
        return Err(MetricsError::InvalidInput(
            "interval must be >= 1 epoch".to_owned(),
        ));
    }
    if curve_endpoints.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(MetricsError::InvalidInput(
            "endpoint values must be finite and > 0".to_owned(),
        ));
    }

    let improvements: Vec<f64> = curve_endpoints
        .windows(2)
        .map(|w| {
            let (prev, cur) = (w[0], w[1]);
            if higher_is_better {
                (cur - prev) / prev * 100.0
            } else {
                (prev - cur) / prev * 100.0
            }
        })
        .collect();
    let count = improvements.len() as f64;
    let mean_pct = improvements.iter().sum::<f64>() / count;
    let variance = improvements
        .iter()
        .map(|v| (v - mean_pct) * (v - mean_pct))
        .sum::<f64>()
        / count;
    Ok(ImprovementStats {
        mean_pct,
        std_pct: variance.sqrt(),
        interval,
    })
}
