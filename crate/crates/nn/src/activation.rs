use serde::{Deserialize, Serialize};

/// Hidden-layer activation. The output layer is always unactivated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    /// tanh approximation of GELU; its exactness is immaterial at the
    /// tolerances used here, and the derivative below matches this form
    /// exactly.
    Gelu,
    None,
}

const GELU_SCALE: f64 = 0.7978845608028654; // sqrt(2/pi)
const GELU_CUBIC: f64 = 0.044715;

impl Activation {
    pub fn value(self, x: f64) -> f64 {
        match self {
            Activation::Relu => x.max(0.0),
            Activation::Gelu => {
                let inner = GELU_SCALE * (x + GELU_CUBIC * x * x * x);
                0.5 * x * (1.0 + inner.tanh())
            }
            Activation::None => x,
        }
    }

    pub fn derivative(self, x: f64) -> f64 {
        match self {
            Activation::Relu => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Gelu => {
                let inner = GELU_SCALE * (x + GELU_CUBIC * x * x * x);
                let t = inner.tanh();
                let d_inner = GELU_SCALE * (1.0 + 3.0 * GELU_CUBIC * x * x);
                0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * d_inner
            }
            Activation::None => 1.0,
        }
    }
}
