//! Deterministic random-number plumbing.
//!
//! Everything random in the simulator flows through a counter-based ChaCha
//! generator keyed by an explicit seed, with independent substreams for
//! parallel sweep points: results are reproducible regardless of worker
//! scheduling.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Seeded deterministic generator.
pub struct Rng(ChaCha12Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha12Rng::seed_from_u64(seed))
    }

    /// Independent substream of a base seed (trial index, stage id, ...).
    pub fn substream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self(rng)
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard-normal pair (Box-Muller).
    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = loop {
            let u = self.uniform();
            if u > 0.0 {
                break u;
            }
        };
        let u2 = self.uniform();
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let (s, c) = libm::sincos(2.0 * core::f64::consts::PI * u2);
        (r * c, r * s)
    }

    /// One random bit.
    pub fn bit(&mut self) -> u8 {
        (self.0.next_u32() >> 31) as u8
    }

    /// `n` random bits.
    pub fn bits(&mut self, n: usize) -> alloc::vec::Vec<u8> {
        (0..n).map(|_| self.bit()).collect()
    }
}
