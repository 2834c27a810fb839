use serde::{Deserialize, Serialize};

use crate::error::MetricsError;

/// Fraction of the initial learning rate whose first crossing bounds the
/// integral.
const CROSSING_FRACTION: f64 = 0.8;
/// Bisection width target for the crossing epoch, in epoch units.
const ROOT_TOLERANCE: f64 = 1e-10;
/// Composite-Simpson resolution over [0, n_crossing].
const SIMPSON_SUBINTERVALS: usize = 10_000;

/// Area between the schedule and 0.8 * eta_init up to the first epoch where
/// the interpolated schedule reaches that level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IlriResult {
    pub ilri: f64,
    /// Real-valued epoch of the first crossing.
    pub n_crossing: f64,
}

/// Piecewise cubic Hermite interpolant with central-difference tangents
/// (one-sided at the ends). Passes through every knot exactly.
#[derive(Debug, Clone)]
pub struct CubicHermite {
    xs: Vec<f64>,
    ys: Vec<f64>,
    tangents: Vec<f64>,
}

impl CubicHermite {
    pub fn catmull_rom(xs: &[f64], ys: &[f64]) -> Result<Self, MetricsError> {
        if xs.len() != ys.len() {
            return Err(MetricsError::InvalidSeries(format!(
                "knot count mismatch: {} xs vs {} ys",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(MetricsError::InvalidSeries(
                "need at least two knots".to_owned(),
            ));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(MetricsError::InvalidSeries(
                "knot positions must be strictly increasing".to_owned(),
            ));
        }
        if xs.iter().chain(ys).any(|v| !v.is_finite()) {
            return Err(MetricsError::InvalidSeries(
                "knots must be finite".to_owned(),
            ));
        }
        let n = xs.len();
        let mut tangents = vec![0.0; n];
        tangents[0] = (ys[1] - ys[0]) / (xs[1] - xs[0]);
        tangents[n - 1] = (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
        for i in 1..n - 1 {
            tangents[i] = (ys[i + 1] - ys[i - 1]) / (xs[i + 1] - xs[i - 1]);
        }
        Ok(Self {
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            tangents,
        })
    }

    /// Interpolated value; requests outside the knot range extrapolate the
    /// end segments.
    pub fn value(&self, x: f64) -> f64 {
        let seg = match self.xs.binary_search_by(|probe| probe.total_cmp(&x)) {
            Ok(i) => return self.ys[i],
            Err(0) => 0,
            Err(i) if i >= self.xs.len() => self.xs.len() - 2,
            Err(i) => i - 1,
        };
        let (x0, x1) = (self.xs[seg], self.xs[seg + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[seg]
            + h10 * h * self.tangents[seg]
            + h01 * self.ys[seg + 1]
            + h11 * h * self.tangents[seg + 1]
    }
}

/// Initial learning rate integral of a sampled schedule.
///
/// Builds the Hermite interpolant over the (epoch, lr) knots, locates the
/// first crossing of 0.8 * eta_init (first sign change over knot intervals,
/// then bisection on the spline), and integrates |eta - 0.8 * eta_init| over
/// [0, n_crossing] by composite Simpson.
pub fn ilri(series: &[(f64, f64)]) -> Result<IlriResult, MetricsError> {
    let xs: Vec<f64> = series.iter().map(|(x, _)| *x).collect();
    let ys: Vec<f64> = series.iter().map(|(_, y)| *y).collect();
    let spline = CubicHermite::catmull_rom(&xs, &ys)?;
    let eta_init = ys[0];
    if eta_init <= 0.0 {
        return Err(MetricsError::InvalidSeries(format!(
            "initial learning rate must be > 0, got {eta_init}"
        )));
    }
    let target = CROSSING_FRACTION * eta_init;

    let bracket = ys
        .windows(2)
        .position(|w| w[0] >= target && w[1] < target)
        .ok_or(MetricsError::NoCrossing)?;
    let (mut lo, mut hi) = (xs[bracket], xs[bracket + 1]);
    while hi - lo > ROOT_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if spline.value(mid) < target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let n_crossing = 0.5 * (lo + hi);

    let h = n_crossing / SIMPSON_SUBINTERVALS as f64;
    let integrand = |x: f64| (spline.value(x) - target).abs();
    let mut sum = integrand(0.0) + integrand(n_crossing);
    for i in 1..SIMPSON_SUBINTERVALS {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * integrand(i as f64 * h);
    }
    Ok(IlriResult {
        ilri: sum * h / 3.0,
        n_crossing,
    })
}
