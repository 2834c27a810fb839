//! DeepONet: a branch net encoding the sampled input function and a trunk
//! net encoding the evaluation point, combined by an inner product over p
//! basis coefficients.
//!
//! Parameters are one flat vector: branch parameters first, then trunk.
//! Training batches share one target grid, so the trunk runs once per grid
//! point per batch rather than once per (sample, point) pair.

use serde::{Deserialize, Serialize};

use crate::dense::{
    backward_dense, forward_dense_cached, init_dense_params, DenseNetworkSpec,
};
use crate::error::NnError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeepONetSpec {
    pub branch: DenseNetworkSpec,
    pub trunk: DenseNetworkSpec,
    /// Basis count; both subnets end in exactly p outputs.
    pub p: usize,
}

impl DeepONetSpec {
    pub fn new(
        branch: DenseNetworkSpec,
        trunk: DenseNetworkSpec,
        p: usize,
    ) -> Result<Self, NnError> {
        let spec = Self { branch, trunk, p };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), NnError> {
        self.branch.validate()?;
        self.trunk.validate()?;
        if self.p == 0 {
            return Err(NnError::InvalidSpec("p must be positive".to_owned()));
        }
        if self.branch.output_width() != self.p || self.trunk.output_width() != self.p {
            return Err(NnError::InvalidSpec(format!(
                "branch ({}) and trunk ({}) must both end in p = {} outputs",
                self.branch.output_width(),
                self.trunk.output_width(),
                self.p
            )));
        }
        if self.trunk.input_width() != 1 {
            return Err(NnError::InvalidSpec(format!(
                "trunk consumes a scalar point, got input width {}",
                self.trunk.input_width()
            )));
        }
        Ok(())
    }

    pub fn param_count(&self) -> usize {
        self.branch.param_count() + self.trunk.param_count()
    }

    fn split<'p>(&self, params: &'p [f64]) -> Result<(&'p [f64], &'p [f64]), NnError> {
        if params.len() != self.param_count() {
            return Err(NnError::ShapeMismatch(format!(
                "expected {} parameters, got {}",
                self.param_count(),
                params.len()
            )));
        }
        Ok(params.split_at(self.branch.param_count()))
    }
}

/// Branch and trunk initialize from their own seeds, concatenated in
/// parameter-layout order.
pub fn init_deeponet_params(spec: &DeepONetSpec) -> Result<Vec<f64>, NnError> {
    spec.validate()?;
    let mut params = init_dense_params(&spec.branch)?;
    params.extend(init_dense_params(&spec.trunk)?);
    Ok(params)
}

/// Sum over j of branch_j(u) * trunk_j(y).
pub fn forward_deeponet(
    spec: &DeepONetSpec,
    params: &[f64],
    u_values: &[f64],
    y: f64,
) -> Result<f64, NnError> {
    spec.validate()?;
    let (branch_params, trunk_params) = spec.split(params)?;
    if u_values.len() != spec.branch.input_width() {
        return Err(NnError::ShapeMismatch(format!(
            "expected {} sensor values, got {}",
            spec.branch.input_width(),
            u_values.len()
        )));
    }
    let (b, _) = forward_dense_cached(&spec.branch, branch_params, u_values, false);
    let (t, _) = forward_dense_cached(&spec.trunk, trunk_params, &[y], false);
    Ok(b.iter().zip(&t).map(|(bj, tj)| bj * tj).sum())
}

fn check_operator_batch(
    spec: &DeepONetSpec,
    u_batch: &[Vec<f64>],
    grid: &[f64],
    g_batch: &[Vec<f64>],
) -> Result<(), NnError> {
    if u_batch.is_empty() || u_batch.len() != g_batch.len() {
        return Err(NnError::ShapeMismatch(format!(
            "batch of {} functions vs {} label rows",
            u_batch.len(),
            g_batch.len()
        )));
    }
    if grid.is_empty() {
        return Err(NnError::ShapeMismatch("empty target grid".to_owned()));
    }
    if u_batch.iter().any(|u| u.len() != spec.branch.input_width()) {
        return Err(NnError::ShapeMismatch(format!(
            "every function row must have {} sensor values",
            spec.branch.input_width()
        )));
    }
    if g_batch.iter().any(|g| g.len() != grid.len()) {
        return Err(NnError::ShapeMismatch(format!(
            "every label row must cover the {} grid points",
            grid.len()
        )));
    }
    Ok(())
}

/// MSE of the batched operator prediction P\[i]\[j] = b_i . t_j against the
/// labels, averaged over samples and grid points.
pub fn deeponet_batch_loss(
    spec: &DeepONetSpec,
    params: &[f64],
    u_batch: &[Vec<f64>],
    grid: &[f64],
    g_batch: &[Vec<f64>],
) -> Result<f64, NnError> {
    spec.validate()?;
    let (branch_params, trunk_params) = spec.split(params)?;
    check_operator_batch(spec, u_batch, grid, g_batch)?;

    let trunk_out: Vec<Vec<f64>> = grid
        .iter()
        .map(|&y| forward_dense_cached(&spec.trunk, trunk_params, &[y], false).0)
        .collect();

    let denom = (u_batch.len() * grid.len()) as f64;
    let mut loss = 0.0;
    for (u, g_row) in u_batch.iter().zip(g_batch) {
        let (b, _) = forward_dense_cached(&spec.branch, branch_params, u, false);
        for (t, g) in trunk_out.iter().zip(g_row) {
            let pred: f64 = b.iter().zip(t).map(|(bj, tj)| bj * tj).sum();
            let d = pred - g;
            loss += d * d;
        }
    }
    Ok(loss / denom)
}

/// Loss plus exact gradients. The reverse pass distributes the prediction
/// gradient dP through the inner product: dB_i = sum_j dP_ij t_j and
/// dT_j = sum_i dP_ij b_i, then backpropagates each subnet.
pub fn deeponet_batch_loss_grad(
    spec: &DeepONetSpec,
    params: &[f64],
    u_batch: &[Vec<f64>],
    grid: &[f64],
    g_batch: &[Vec<f64>],
) -> Result<(f64, Vec<f64>), NnError> {
    spec.validate()?;
    let (branch_params, trunk_params) = spec.split(params)?;
    check_operator_batch(spec, u_batch, grid, g_batch)?;

    let nb = u_batch.len();
    let nt = grid.len();
    let p = spec.p;
    let denom = (nb * nt) as f64;

    // Trunk forwards, cached once per grid point.
    let trunk_inputs: Vec<[f64; 1]> = grid.iter().map(|&y| [y]).collect();
    let trunk_runs: Vec<_> = trunk_inputs
        .iter()
        .map(|y| forward_dense_cached(&spec.trunk, trunk_params, y, true))
        .collect();

    let mut loss = 0.0;
    let mut grads = vec![0.0; params.len()];
    let (branch_grads, trunk_grads) = grads.split_at_mut(spec.branch.param_count());
    // dT accumulates over the sample loop; trunk backprop runs once per
    // grid point at the end.
    let mut d_trunk = vec![vec![0.0; p]; nt];

    for (u, g_row) in u_batch.iter().zip(g_batch) {
        let (b, branch_cache) = forward_dense_cached(&spec.branch, branch_params, u, true);
        let mut d_branch = vec![0.0; p];
        for (j, ((t, _), g)) in trunk_runs.iter().zip(g_row).enumerate() {
            let pred: f64 = b.iter().zip(t).map(|(bj, tj)| bj * tj).sum();
            let d = pred - g;
            loss += d * d;
            let dp = 2.0 * d / denom;
            for k in 0..p {
                d_branch[k] += dp * t[k];
                d_trunk[j][k] += dp * b[k];
            }
        }
        backward_dense(
            &spec.branch,
            branch_params,
            u,
            &branch_cache,
            &d_branch,
            branch_grads,
        );
    }

    for (j, (y, (_, trunk_cache))) in trunk_inputs.iter().zip(&trunk_runs).enumerate() {
        backward_dense(
            &spec.trunk,
            trunk_params,
            y,
            trunk_cache,
            &d_trunk[j],
            trunk_grads,
        );
    }

    Ok((loss / denom, grads))
}

/// Desk-scale operator network: branch 100 -> 64 -> 64 -> p, trunk
/// 1 -> 64 -> 64 -> p, p = 10, GELU hidden activations. The trunk seed is
/// offset so the two subnets draw independent initial weights.
pub fn desk_deeponet_spec(sensor_count: usize, init_seed: u64) -> DeepONetSpec {
    use crate::activation::Activation;
    let p = 10;
    DeepONetSpec {
        branch: DenseNetworkSpec {
            layer_widths: vec![sensor_count, 64, 64, p],
            activation: Activation::Gelu,
            init_seed,
        },
        trunk: DenseNetworkSpec {
            layer_widths: vec![1, 64, 64, p],
            activation: Activation::Gelu,
            init_seed: init_seed.wrapping_add(1),
        },
        p,
    }
}

/// Paper-scale operator network: four hidden layers of 256 in each subnet,
/// p = 10.
pub fn paper_deeponet_spec(sensor_count: usize, init_seed: u64) -> DeepONetSpec {
    use crate::activation::Activation;
    let p = 10;
    DeepONetSpec {
        branch: DenseNetworkSpec {
            layer_widths: vec![sensor_count, 256, 256, 256, 256, p],
            activation: Activation::Gelu,
            init_seed,
        },
        trunk: DenseNetworkSpec {
            layer_widths: vec![1, 256, 256, 256, 256, p],
            activation: Activation::Gelu,
            init_seed: init_seed.wrapping_add(1),
        },
        p,
    }
}
