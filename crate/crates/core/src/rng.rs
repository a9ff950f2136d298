//! Seeded pseudo-random streams.
//!
//! Every stochastic operation in the crate draws from [`Xoshiro256pp`]
//! (xoshiro256++, state expanded from a single `u64` seed through
//! SplitMix64). Both algorithms are fixed by their published constants, so
//! a seed pins a stream.

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_distr::{Distribution, Gamma, StandardNormal};
use rand_xoshiro::Xoshiro256PlusPlus;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Xoshiro256pp(Xoshiro256PlusPlus);

impl Xoshiro256pp {
    pub fn seed_from_u64(seed: u64) -> Self {
        Xoshiro256pp(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    /// Raw state constructor. The all-zero state is a fixed point and is rejected.
    pub fn from_state(s: [u64; 4]) -> Option<Self> {
        if s == [0; 4] {
            return None;
        }
        let mut bytes = [0u8; 32];
        for (chunk, word) in bytes.chunks_exact_mut(8).zip(s) {
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        Some(Xoshiro256pp(Xoshiro256PlusPlus::from_seed(bytes)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn next_f64(&mut self) -> f64 {
        self.0.random()
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        self.0.random_range(0..n)
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        items.shuffle(&mut self.0);
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.0)
    }

    /// Gamma(shape, 1) variate.
    pub fn gamma(&mut self, shape: f64) -> f64 {
        Gamma::new(shape, 1.0).expect("positive finite shape").sample(&mut self.0)
    }
}
