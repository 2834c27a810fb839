//! Fully connected networks over one flat parameter vector.
//!
//! Layout per layer: weights row-major `[out][in]`, then biases `[out]`.
//! All arithmetic is plain f64 loops so a training step is deterministic
//! down to the bit given (spec, params, data).

use serde::{Deserialize, Serialize};

use crate::activation::Activation;
use crate::error::NnError;
use crate::init::{glorot_limit, InitRng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenseNetworkSpec {
    /// Input, hidden..., output widths; at least two entries.
    pub layer_widths: Vec<usize>,
    /// Applied after every layer except the last.
    pub activation: Activation,
    pub init_seed: u64,
}

impl DenseNetworkSpec {
    pub fn new(
        layer_widths: Vec<usize>,
        activation: Activation,
        init_seed: u64,
    ) -> Result<Self, NnError> {
        let spec = Self {
            layer_widths,
            activation,
            init_seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), NnError> {
        if self.layer_widths.len() < 2 {
            return Err(NnError::InvalidSpec(format!(
                "need at least input and output widths, got {:?}",
                self.layer_widths
            )));
        }
        if self.layer_widths.iter().any(|&w| w == 0) {
            return Err(NnError::InvalidSpec(format!(
                "layer widths must be positive, got {:?}",
                self.layer_widths
            )));
        }
        Ok(())
    }

    pub fn input_width(&self) -> usize {
        self.layer_widths[0]
    }

    pub fn output_width(&self) -> usize {
        *self.layer_widths.last().unwrap()
    }

    pub fn layer_count(&self) -> usize {
        self.layer_widths.len() - 1
    }

    pub fn param_count(&self) -> usize {
        self.layer_widths
            .windows(2)
            .map(|w| w[0] * w[1] + w[1])
            .sum()
    }
}

/// Glorot-uniform weights, zero biases, drawn layer by layer in parameter
/// order from a ChaCha12 stream seeded with `init_seed`.
pub fn init_dense_params(spec: &DenseNetworkSpec) -> Result<Vec<f64>, NnError> {
    spec.validate()?;
    let mut rng = InitRng::new(spec.init_seed);
    let mut params = Vec::with_capacity(spec.param_count());
    for w in spec.layer_widths.windows(2) {
        let (fan_in, fan_out) = (w[0], w[1]);
        let limit = glorot_limit(fan_in, fan_out);
        for _ in 0..fan_in * fan_out {
            params.push(rng.symmetric(limit));
        }
        params.extend(std::iter::repeat(0.0).take(fan_out));
    }
    Ok(params)
}

fn check_shapes(spec: &DenseNetworkSpec, params: &[f64], input: &[f64]) -> Result<(), NnError> {
    spec.validate()?;
    if params.len() != spec.param_count() {
        return Err(NnError::ShapeMismatch(format!(
            "expected {} parameters, got {}",
            spec.param_count(),
            params.len()
        )));
    }
    if input.len() != spec.input_width() {
        return Err(NnError::ShapeMismatch(format!(
            "expected input width {}, got {}",
            spec.input_width(),
            input.len()
        )));
    }
    Ok(())
}

/// Forward activations retained for the backward pass: `pre[l]` holds the
/// affine outputs of layer l, `post[l]` the activated values fed onward
/// (`post` excludes the final layer, whose raw output is returned).
pub(crate) struct DenseCache {
    pre: Vec<Vec<f64>>,
    post: Vec<Vec<f64>>,
}

pub(crate) fn forward_dense_cached(
    spec: &DenseNetworkSpec,
    params: &[f64],
    input: &[f64],
    cache: bool,
) -> (Vec<f64>, DenseCache) {
    let layers = spec.layer_count();
    let mut pre = Vec::with_capacity(if cache { layers } else { 0 });
    let mut post = Vec::with_capacity(if cache { layers.saturating_sub(1) } else { 0 });

    let mut current = input.to_vec();
    let mut offset = 0;
    for (l, w) in spec.layer_widths.windows(2).enumerate() {
        let (fan_in, fan_out) = (w[0], w[1]);
        let bias_offset = offset + fan_in * fan_out;
        let mut z = vec![0.0; fan_out];
        for (o, zo) in z.iter_mut().enumerate() {
            let row = offset + o * fan_in;
            let mut acc = params[bias_offset + o];
            for (i, x) in current.iter().enumerate() {
                acc += params[row + i] * x;
            }
            *zo = acc;
        }
        offset = bias_offset + fan_out;

        let is_last = l + 1 == layers;
        let next = if is_last {
            z.clone()
        } else {
            z.iter().map(|&v| spec.activation.value(v)).collect()
        };
        if cache {
            pre.push(z);
            if !is_last {
                post.push(next.clone());
            }
        }
        current = next;
    }
    (current, DenseCache { pre, post })
}

/// Affine + activation per layer; the output layer stays linear.
pub fn forward_dense(
    spec: &DenseNetworkSpec,
    params: &[f64],
    input: &[f64],
) -> Result<Vec<f64>, NnError> {
    check_shapes(spec, params, input)?;
    Ok(forward_dense_cached(spec, params, input, false).0)
}

/// Reverse pass for one sample. `output_grad` is dLoss/dOutput; parameter
/// gradients accumulate into `param_grads` (callers zero it per batch) and
/// the gradient with respect to the input is returned.
pub(crate) fn backward_dense(
    spec: &DenseNetworkSpec,
    params: &[f64],
    input: &[f64],
    cache: &DenseCache,
    output_grad: &[f64],
    param_grads: &mut [f64],
) -> Vec<f64> {
    let layers = spec.layer_count();
    // dz = gradient wrt the current layer's pre-activation.
    let mut dz = output_grad.to_vec();

    // Parameter offsets of each layer, computed once from the back.
    let mut offsets = Vec::with_capacity(layers);
    let mut offset = 0;
    for w in spec.layer_widths.windows(2) {
        offsets.push(offset);
        offset += w[0] * w[1] + w[1];
    }

    for l in (0..layers).rev() {
        let fan_in = spec.layer_widths[l];
        let fan_out = spec.layer_widths[l + 1];
        let offset = offsets[l];
        let bias_offset = offset + fan_in * fan_out;
        let layer_input: &[f64] = if l == 0 { input } else { &cache.post[l - 1] };

        let mut dx = vec![0.0; fan_in];
        for (o, &g) in dz.iter().enumerate() {
            let row = offset + o * fan_in;
            param_grads[bias_offset + o] += g;
            for (i, x) in layer_input.iter().enumerate() {
                param_grads[row + i] += g * x;
                dx[i] += params[row + i] * g;
            }
        }

        if l > 0 {
            // Pull dx back through the previous layer's activation.
            let prev_pre = &cache.pre[l - 1];
            dz = dx
                .iter()
                .zip(prev_pre)
                .map(|(d, &z)| d * spec.activation.derivative(z))
                .collect();
        } else {
            dz = dx;
        }
    }
    dz
}

fn check_batch(
    spec: &DenseNetworkSpec,
    params: &[f64],
    inputs: &[Vec<f64>],
    targets: &[Vec<f64>],
) -> Result<(), NnError> {
    if inputs.is_empty() || inputs.len() != targets.len() {
        return Err(NnError::ShapeMismatch(format!(
            "batch of {} inputs vs {} targets",
            inputs.len(),
            targets.len()
        )));
    }
    check_shapes(spec, params, &inputs[0])?;
    let out = spec.output_width();
    if inputs.iter().any(|r| r.len() != spec.input_width())
        || targets.iter().any(|r| r.len() != out)
    {
        return Err(NnError::ShapeMismatch(
            "ragged batch rows".to_owned(),
        ));
    }
    Ok(())
}

/// Mean-squared error over every output element of the batch.
pub fn dense_batch_loss(
    spec: &DenseNetworkSpec,
    params: &[f64],
    inputs: &[Vec<f64>],
    targets: &[Vec<f64>],
) -> Result<f64, NnError> {
    check_batch(spec, params, inputs, targets)?;
    let denom = (inputs.len() * spec.output_width()) as f64;
    let mut loss = 0.0;
    for (input, target) in inputs.iter().zip(targets) {
        let (output, _) = forward_dense_cached(spec, params, input, false);
        for (p, t) in output.iter().zip(target) {
            let d = p - t;
            loss += d * d;
        }
    }
    Ok(loss / denom)
}

/// MSE loss plus its exact gradient with respect to every parameter.
pub fn dense_batch_loss_grad(
    spec: &DenseNetworkSpec,
    params: &[f64],
    inputs: &[Vec<f64>],
    targets: &[Vec<f64>],
) -> Result<(f64, Vec<f64>), NnError> {
    check_batch(spec, params, inputs, targets)?;
    let denom = (inputs.len() * spec.output_width()) as f64;
    let mut loss = 0.0;
    let mut grads = vec![0.0; params.len()];
    for (input, target) in inputs.iter().zip(targets) {
        let (output, cache) = forward_dense_cached(spec, params, input, true);
        let output_grad: Vec<f64> = output
            .iter()
            .zip(target)
            .map(|(p, t)| {
                let d = p - t;
                loss += d * d;
                2.0 * d / denom
            })
            .collect();
        backward_dense(spec, params, input, &cache, &output_grad, &mut grads);
    }
    Ok((loss / denom, grads))
}
