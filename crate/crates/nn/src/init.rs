//! Seeded Glorot-uniform initialization.
//!
//! The float conversion is hand-specified (53 mantissa bits from a ChaCha12
//! word) so initial parameter vectors are bit-identical across platforms.

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

pub(crate) struct InitRng {
    inner: ChaCha12Rng,
}

impl InitRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [-limit, limit).
    pub fn symmetric(&mut self, limit: f64) -> f64 {
        (2.0 * self.uniform() - 1.0) * limit
    }
}

/// Glorot-uniform limit for a layer: sqrt(6 / (fan_in + fan_out)).
pub(crate) fn glorot_limit(fan_in: usize, fan_out: usize) -> f64 {
    (6.0 / (fan_in + fan_out) as f64).sqrt()
}
