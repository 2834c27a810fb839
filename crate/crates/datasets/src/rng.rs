//! Seedable random source with documented draw semantics.
//!
//! Datasets must regenerate bit-identically across platforms and library
//! upgrades, so every transformation from raw 64-bit generator output to a
//! float is spelled out here instead of delegated to distribution helpers.
//! The composite algorithm is identified by [`GENERATOR_ID`] and stored in
//! dataset metadata.

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

/// Identifier written into dataset metadata. Covers the raw generator, the
/// substream scheme, and the normal-variate method, all of which affect
/// reproducibility.
pub const GENERATOR_ID: &str = "chacha12/substream/box-muller";

/// A ChaCha12 generator bound to one logical substream.
///
/// Stream 0 is reserved for dataset-level operations (shuffles); parallel
/// unit `i` (a GRF function, for example) uses stream `i + 1`. Units can
/// then be generated in any order, or in parallel, without interacting.
pub struct SubstreamRng {
    inner: ChaCha12Rng,
}

impl SubstreamRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha12Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in [0, 1) with 53 random mantissa bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// One Box-Muller pair of independent standard normals.
    ///
    /// The radial draw uses 1 - uniform() so the logarithm argument lies in
    /// (0, 1] and never hits zero.
    pub fn standard_normal_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        (r * theta.cos(), r * theta.sin())
    }

    /// Fills `out` with standard normals, consuming whole Box-Muller pairs.
    /// An odd length discards the second half of the final pair so that the
    /// draw count depends only on `out.len()`.
    pub fn fill_standard_normal(&mut self, out: &mut [f64]) {
        let mut i = 0;
        while i + 1 < out.len() {
            let (a, b) = self.standard_normal_pair();
            out[i] = a;
            out[i + 1] = b;
            i += 2;
        }
        if i < out.len() {
            out[i] = self.standard_normal_pair().0;
        }
    }

    /// Uniform integer in [0, bound) by rejection, free of modulo bias.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        // 2^64 mod bound: raw values under this threshold would make the
        // low residues overrepresented.
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let r = self.next_u64();
            if r >= threshold {
                return r % bound;
            }
        }
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, data: &mut [T]) {
        for i in (1..data.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            data.swap(i, j);
        }
    }
}
