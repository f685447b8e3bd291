//! Counter-based sampling streams.
//!
//! Every random draw in the crate is a pure function of
//! `(global_seed, stream_id, index)`: the ChaCha20 key holds the seed and the
//! sample index, the ChaCha stream id selects the family. Gaussians use
//! Box–Muller on 53-bit uniforms. The uniform stream is bit-identical
//! everywhere; Gaussians inherit whatever rounding the platform's `ln`,
//! `sin` and `cos` have.

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub const STREAM_HILBERT_SCHMIDT: u64 = 1;
pub const STREAM_SEPARABLE: u64 = 2;
pub const STREAM_CHESSBOARD: u64 = 3;
pub const STREAM_AUX: u64 = 4;

#[derive(Debug, Clone)]
pub struct SampleRng {
    inner: ChaCha20Rng,
    spare: Option<f64>,
}

impl SampleRng {
    pub fn new(seed: u64, stream: u64, index: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&index.to_le_bytes());
        let mut inner = ChaCha20Rng::from_seed(key);
        inner.set_stream(stream);
        Self { inner, spare: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `(0, 1]`.
    pub fn uniform(&mut self) -> f64 {
        ((self.inner.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// Standard complex Gaussian, `E|z|² = 1`.
    pub fn complex_normal(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(s * self.standard_normal(), s * self.standard_normal())
    }

    /// Exponential(1) variate.
    pub fn exponential(&mut self) -> f64 {
        -self.uniform().ln()
    }
}
