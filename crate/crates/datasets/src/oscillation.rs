//! Damped-oscillation sequence dataset.
//!
//! A single-degree-of-freedom oscillator `m u'' + c u' + k u = 0` is
//! integrated with the average-acceleration Newmark method, the resulting
//! displacement series are cut into fixed-size history/horizon windows, and
//! the windows are min-max normalized and split into train/validation sets.

use serde::{Deserialize, Serialize};

use crate::error::DatasetError;
use crate::rng::SubstreamRng;

pub const OSCILLATOR_MASS: f64 = 1.0;
pub const OSCILLATOR_STIFFNESS: f64 = 200.0;
pub const OSCILLATOR_U0: f64 = 0.1;
pub const OSCILLATOR_V0: f64 = 0.0;
pub const OSCILLATOR_DT: f64 = 1e-3;
pub const OSCILLATOR_T_END: f64 = 10.0;

/// Damping ratios combined in the full dataset build.
pub const DAMPING_RATIOS: [f64; 3] = [0.0, 0.01, 0.02];

pub const HISTORY_LEN: usize = 100;
pub const HORIZON_LEN: usize = 20;
pub const TRAIN_FRACTION: f64 = 0.8;

/// Free-vibration oscillator configuration. Mass, stiffness, initial state,
/// and grid are fixed constants of the dataset; only the damping ratio
/// varies between series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorSpec {
    pub damping_ratio: f64,
}

impl OscillatorSpec {
    pub fn new(damping_ratio: f64) -> Result<Self, DatasetError> {
        if !damping_ratio.is_finite() || damping_ratio < 0.0 {
            return Err(DatasetError::InvalidSpec(format!(
                "damping ratio must be finite and non-negative, got {damping_ratio}"
            )));
        }
        Ok(Self { damping_ratio })
    }

    /// c = zeta * 2 sqrt(m k).
    pub fn damping_coefficient(&self) -> f64 {
        self.damping_ratio * 2.0 * (OSCILLATOR_MASS * OSCILLATOR_STIFFNESS).sqrt()
    }

    /// a(0) = -(c v0 + k u0) / m, the acceleration consistent with the
    /// equation of motion at the initial state.
    pub fn initial_acceleration(&self) -> f64 {
        -(self.damping_coefficient() * OSCILLATOR_V0 + OSCILLATOR_STIFFNESS * OSCILLATOR_U0)
            / OSCILLATOR_MASS
    }

    /// Number of integration steps; the returned series has one more point.
    pub fn step_count(&self) -> usize {
        (OSCILLATOR_T_END / OSCILLATOR_DT).round() as usize
    }
}

/// Integrates the oscillator with the unconditionally stable
/// average-acceleration Newmark scheme (beta = 1/4, gamma = 1/2) and returns
/// the displacement at every grid point, including t = 0.
pub fn newmark_beta_solve(spec: &OscillatorSpec) -> Vec<f64> {
    let m = OSCILLATOR_MASS;
    let k = OSCILLATOR_STIFFNESS;
    let c = spec.damping_coefficient();
    let dt = OSCILLATOR_DT;
    let b = 0.25;
    let g = 0.5;

    let mut u = OSCILLATOR_U0;
    let mut v = OSCILLATOR_V0;
    let mut a = spec.initial_acceleration();

    let steps = spec.step_count();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(u);

    // Effective stiffness is constant on a uniform grid.
    let kh = k + g / (b * dt) * c + 1.0 / (b * dt * dt) * m;
    for _ in 0..steps {
        // Zero external force: the right-hand side carries only the state.
        let rh = m * (1.0 / (b * dt * dt) * u + 1.0 / (b * dt) * v + (1.0 / (2.0 * b) - 1.0) * a)
            + c * (g / (b * dt) * u
                + (g / b - 1.0) * v
                + dt * (g / (2.0 * b) - 1.0) * a);
        let un = rh / kh;
        let an = 1.0 / (b * dt * dt) * (un - u) - 1.0 / (b * dt) * v - (1.0 / (2.0 * b) - 1.0) * a;
        let vn = v + dt * ((1.0 - g) * a + g * an);
        u = un;
        v = vn;
        a = an;
        out.push(u);
    }
    out
}

/// History/horizon windows cut from displacement series. Each input row has
/// `HISTORY_LEN` values and each label row `HORIZON_LEN`; the logical array
/// shapes are (count, history, 1) and (count, horizon, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedSequenceDataset {
    pub inputs: Vec<Vec<f64>>,
    pub labels: Vec<Vec<f64>>,
    /// (min, max) used for normalization, when applied.
    pub normalization: Option<(f64, f64)>,
}

impl WindowedSequenceDataset {
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }
}

/// Cuts a series into overlapping (history, horizon) pairs: pair `i` is
/// (series[i .. i+history], series[i+history .. i+history+horizon]), giving
/// len - history - horizon + 1 pairs.
pub fn sliding_window(
    series: &[f64],
    history: usize,
    horizon: usize,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>), DatasetError> {
    if history == 0 || horizon == 0 {
        return Err(DatasetError::InvalidSpec(
            "history and horizon must both be positive".to_owned(),
        ));
    }
    if series.len() < history + horizon {
        return Err(DatasetError::SeriesTooShort {
            len: series.len(),
            history,
            horizon,
        });
    }
    let count = series.len() - history - horizon + 1;
    let mut inputs = Vec::with_capacity(count);
    let mut labels = Vec::with_capacity(count);
    for i in 0..count {
        inputs.push(series[i..i + history].to_vec());
        labels.push(series[i + history..i + history + horizon].to_vec());
    }
    Ok((inputs, labels))
}

/// Min-max normalizes the whole dataset to [0, 1] using one global (min,
/// max) over inputs and labels together, then shuffles deterministically and
/// splits train/validation. The train side gets floor(count * fraction).
pub fn normalize_and_split(
    dataset: WindowedSequenceDataset,
    seed: u64,
    train_fraction: f64,
) -> Result<(WindowedSequenceDataset, WindowedSequenceDataset), DatasetError> {
    if dataset.is_empty() {
        return Err(DatasetError::InvalidSpec(
            "cannot split an empty dataset".to_owned(),
        ));
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(DatasetError::InvalidSpec(format!(
            "train fraction must lie strictly between 0 and 1, got {train_fraction}"
        )));
    }

    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for row in dataset.inputs.iter().chain(dataset.labels.iter()) {
        for &v in row {
            min = min.min(v);
            max = max.max(v);
        }
    }
    if max <= min {
        return Err(DatasetError::ConstantData(min));
    }
    // Division keeps the range exact: the max maps to (max-min)/(max-min)
    // = 1 and monotonicity of IEEE division keeps everything in [0, 1].
    let span = max - min;
    let normalize_row = |row: &[f64]| -> Vec<f64> {
        row.iter().map(|v| (v - min) / span).collect()
    };

    let count = dataset.len();
    let mut order: Vec<usize> = (0..count).collect();
    SubstreamRng::new(seed, 0).shuffle(&mut order);

    let train_count = (count as f64 * train_fraction).floor() as usize;
    let split = |indices: &[usize]| WindowedSequenceDataset {
        inputs: indices
            .iter()
            .map(|&i| normalize_row(&dataset.inputs[i]))
            .collect(),
        labels: indices
            .iter()
            .map(|&i| normalize_row(&dataset.labels[i]))
            .collect(),
        normalization: Some((min, max)),
    };
    let train = split(&order[..train_count]);
    let validation = split(&order[train_count..]);
    Ok((train, validation))
}

/// Full dataset build: one Newmark series per damping ratio, windowed,
/// concatenated in ratio order, normalized globally, and split 80/20.
pub fn oscillation_build(
    seed: u64,
) -> Result<(WindowedSequenceDataset, WindowedSequenceDataset), DatasetError> {
    let mut inputs = Vec::new();
    let mut labels = Vec::new();
    for zeta in DAMPING_RATIOS {
        let spec = OscillatorSpec::new(zeta)?;
        let series = newmark_beta_solve(&spec);
        let (i, l) = sliding_window(&series, HISTORY_LEN, HORIZON_LEN)?;
        inputs.extend(i);
        labels.extend(l);
    }
    normalize_and_split(
        WindowedSequenceDataset {
            inputs,
            labels,
            normalization: None,
        },
        seed,
        TRAIN_FRACTION,
    )
}
