//! AdamW with decoupled weight decay.

use serde::{Deserialize, Serialize};

use crate::error::NnError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerParams {
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub weight_decay: f64,
}

impl Default for OptimizerParams {
    fn default() -> Self {
        Self {
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            weight_decay: 0.01,
        }
    }
}

impl OptimizerParams {
    pub fn validate(&self) -> Result<(), NnError> {
        if !(self.beta1 > 0.0 && self.beta1 < self.beta2 && self.beta2 < 1.0) {
            return Err(NnError::InvalidSpec(format!(
                "moment decays must satisfy 0 < beta1 < beta2 < 1, got ({}, {})",
                self.beta1, self.beta2
            )));
        }
        if !(self.epsilon > 0.0) || self.weight_decay < 0.0 {
            return Err(NnError::InvalidSpec(format!(
                "epsilon must be positive and weight decay non-negative, got ({}, {})",
                self.epsilon, self.weight_decay
            )));
        }
        Ok(())
    }
}

/// Parameters plus optimizer moments; the unit one AdamW step advances.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterState {
    pub params: Vec<f64>,
    first_moment: Vec<f64>,
    second_moment: Vec<f64>,
    step: u64,
}

impl ParameterState {
    pub fn new(params: Vec<f64>) -> Self {
        let n = params.len();
        Self {
            params,
            first_moment: vec![0.0; n],
            second_moment: vec![0.0; n],
            step: 0,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }
}

/// One AdamW update in place.
///
/// Decay is decoupled: parameters shrink by lr * weight_decay first, then
/// move along the bias-corrected moment direction. Any non-finite gradient
/// component aborts the step with its index so callers can mark the run as
/// diverged instead of training on poison.
pub fn adamw_step(
    state: &mut ParameterState,
    grads: &[f64],
    lr: f64,
    opt: &OptimizerParams,
) -> Result<(), NnError> {
    opt.validate()?;
    if grads.len() != state.params.len() {
        return Err(NnError::ShapeMismatch(format!(
            "{} gradients for {} parameters",
            grads.len(),
            state.params.len()
        )));
    }
    if !(lr.is_finite() && lr >= 0.0) {
        return Err(NnError::InvalidSpec(format!(
            "learning rate must be finite and non-negative, got {lr}"
        )));
    }
    if let Some(index) = grads.iter().position(|g| !g.is_finite()) {
        return Err(NnError::NonFiniteGradient { index });
    }

    state.step += 1;
    let t = state.step as i32;
    let bias1 = 1.0 - opt.beta1.powi(t);
    let bias2 = 1.0 - opt.beta2.powi(t);

    for i in 0..state.params.len() {
        state.params[i] *= 1.0 - lr * opt.weight_decay;
        let g = grads[i];
        let m = opt.beta1 * state.first_moment[i] + (1.0 - opt.beta1) * g;
        let v = opt.beta2 * state.second_moment[i] + (1.0 - opt.beta2) * g * g;
        state.first_moment[i] = m;
        state.second_moment[i] = v;
        let m_hat = m / bias1;
        let v_hat = v / bias2;
        state.params[i] -= lr * m_hat / (v_hat.sqrt() + opt.epsilon);
    }
    Ok(())
}
