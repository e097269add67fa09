//! Deterministic pseudo-random test data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Scalar, ScalarField};
use crate::linalg::Vector;

/// Seed used by every randomized check unless the caller supplies one.
pub const DEFAULT_SEED: u64 = 0x5eed_b7ace;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Small rationals `n/d` with `|n| <= 6`, `1 <= d <= 4`, or a uniform residue.
    pub fn scalar(&mut self, field: ScalarField) -> Scalar {
        match field {
            ScalarField::Rationals => {
                let n: i64 = self.rng.random_range(-6..=6);
                let d: i64 = self.rng.random_range(1..=4);
                field.from_i64(n) * field.from_i64(d).inverse().expect("d > 0")
            }
            ScalarField::Prime(p) => field.from_i64(self.rng.random_range(0..p) as i64),
        }
    }

    pub fn vector(&mut self, field: ScalarField, dim: usize) -> Vector {
        let entries = (0..dim).map(|_| self.scalar(field)).collect();
        Vector::new(field, entries).expect("sampled in one field")
    }
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler::new(DEFAULT_SEED)
    }
}
