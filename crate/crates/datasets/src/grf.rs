//! Integral-operator dataset drawn from a Gaussian random field.
//!
//! Each sample is a function u on [0, 1], drawn from a zero-mean GRF with a
//! squared-exponential kernel whose length scale is itself random, paired
//! with the antiderivative G(u)(y) = integral of u from 0 to y evaluated on
//! the same grid via cumulative trapezoid.

use nalgebra::{Cholesky, DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::DatasetError;
use crate::rng::SubstreamRng;

/// GRF dataset configuration. Sensors and targets share one uniform grid on
/// [0, 1]; the kernel is exp(-(x - x')^2 / (2 l^2)) with l drawn uniformly
/// per function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrfSpec {
    pub function_count: usize,
    pub sensor_count: usize,
    pub length_scale_min: f64,
    pub length_scale_max: f64,
    /// Initial diagonal regularizer; escalates tenfold on Cholesky failure.
    pub jitter_initial: f64,
    /// Escalation cap; exceeding it is an error, never a silent fallback.
    pub jitter_max: f64,
}

impl GrfSpec {
    /// Paper-grid defaults with a caller-chosen function count.
    pub fn with_function_count(function_count: usize) -> Self {
        Self {
            function_count,
            sensor_count: 100,
            length_scale_min: 0.1,
            length_scale_max: 0.4,
            jitter_initial: 1e-10,
            jitter_max: 1e-6,
        }
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        if self.function_count == 0 {
            return Err(DatasetError::InvalidSpec(
                "function count must be positive".to_owned(),
            ));
        }
        if self.sensor_count < 2 {
            return Err(DatasetError::InvalidSpec(format!(
                "need at least 2 sensor points, got {}",
                self.sensor_count
            )));
        }
        if !(self.length_scale_min > 0.0
            && self.length_scale_max >= self.length_scale_min
            && self.length_scale_max.is_finite())
        {
            return Err(DatasetError::InvalidSpec(format!(
                "length-scale range [{}, {}] is not a positive interval",
                self.length_scale_min, self.length_scale_max
            )));
        }
        if !(self.jitter_initial > 0.0 && self.jitter_max >= self.jitter_initial) {
            return Err(DatasetError::InvalidSpec(format!(
                "jitter range [{:e}, {:e}] is not a positive interval",
                self.jitter_initial, self.jitter_max
            )));
        }
        Ok(())
    }

    /// The shared sensor/target grid: i / (sensor_count - 1).
    pub fn grid(&self) -> Vec<f64> {
        let n = self.sensor_count;
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    }
}

/// One function/antiderivative pair. The target grid is shared across the
/// dataset and stored once on [`OperatorDataset`].
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSample {
    pub u_values: Vec<f64>,
    pub g_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorDataset {
    pub samples: Vec<OperatorSample>,
    /// Target points, logically broadcast to shape (count, sensor_count).
    pub y_points: Vec<f64>,
    pub seed: u64,
    pub generator_id: String,
}

impl OperatorDataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Cumulative trapezoid of `u` over `grid`, anchored at g[0] = 0.
pub fn cumulative_trapezoid(u: &[f64], grid: &[f64]) -> Vec<f64> {
    debug_assert_eq!(u.len(), grid.len());
    let mut g = Vec::with_capacity(u.len());
    let mut acc = 0.0;
    g.push(acc);
    for i in 1..u.len() {
        acc += 0.5 * (u[i - 1] + u[i]) * (grid[i] - grid[i - 1]);
        g.push(acc);
    }
    g
}

/// Squared-exponential kernel matrix exp(-(x_i - x_j)^2 / (2 l^2)) over
/// `grid`, with `jitter` added to the diagonal.
pub fn kernel_matrix(grid: &[f64], length_scale: f64, jitter: f64) -> DMatrix<f64> {
    let n = grid.len();
    let denom = 2.0 * length_scale * length_scale;
    DMatrix::from_fn(n, n, |i, j| {
        let d = grid[i] - grid[j];
        let k = (-d * d / denom).exp();
        if i == j {
            k + jitter
        } else {
            k
        }
    })
}

fn sample_function(
    spec: &GrfSpec,
    grid: &[f64],
    seed: u64,
    function_index: usize,
) -> Result<OperatorSample, DatasetError> {
    // Stream 0 is reserved for dataset-level shuffles, so functions start
    // at stream 1. Draw order inside a stream is fixed: length scale first,
    // then the normal vector.
    let mut rng = SubstreamRng::new(seed, function_index as u64 + 1);
    let length_scale = rng.uniform_in(spec.length_scale_min, spec.length_scale_max);
    let mut z = vec![0.0; grid.len()];
    rng.fill_standard_normal(&mut z);

    let mut jitter = spec.jitter_initial;
    let chol: Cholesky<f64, nalgebra::Dyn> = loop {
        if let Some(c) = kernel_matrix(grid, length_scale, jitter).cholesky() {
            break c;
        }
        jitter *= 10.0;
        if jitter > spec.jitter_max {
            return Err(DatasetError::CholeskyFailure {
                function_index,
                max_jitter: spec.jitter_max,
            });
        }
    };

    let u = chol.l() * DVector::from_column_slice(&z);
    let u_values: Vec<f64> = u.iter().copied().collect();
    let g_values = cumulative_trapezoid(&u_values, grid);
    Ok(OperatorSample { u_values, g_values })
}

/// Draws `spec.function_count` functions. Functions are generated in
/// parallel on independent substreams keyed by (seed, index), so the result
/// is identical regardless of thread count or completion order.
pub fn grf_sample(spec: &GrfSpec, seed: u64) -> Result<OperatorDataset, DatasetError> {
    spec.validate()?;
    let grid = spec.grid();
    let samples: Vec<OperatorSample> = (0..spec.function_count)
        .into_par_iter()
        .map(|f| sample_function(spec, &grid, seed, f))
        .collect::<Result<_, _>>()?;
    Ok(OperatorDataset {
        samples,
        y_points: grid,
        seed,
        generator_id: crate::rng::GENERATOR_ID.to_owned(),
    })
}

/// Dataset with every u forced to a constant, bypassing sampling; labels
/// still go through the trapezoid path. For u = 1 the labels equal the grid
/// exactly, which pins the label pipeline in tests.
pub fn constant_operator_dataset(spec: &GrfSpec, value: f64) -> Result<OperatorDataset, DatasetError> {
    spec.validate()?;
    let grid = spec.grid();
    let u_values = vec![value; grid.len()];
    let g_values = cumulative_trapezoid(&u_values, &grid);
    let sample = OperatorSample { u_values, g_values };
    Ok(OperatorDataset {
        samples: vec![sample; spec.function_count],
        y_points: grid,
        seed: 0,
        generator_id: "constant".to_owned(),
    })
}
