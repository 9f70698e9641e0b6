//! Deterministic seed derivation.
//!
//! Every random stream in the crate is a [`ChaCha8Rng`] whose seed is derived
//! from a master seed and a path of integer labels (replication, method,
//! replicate, score column, ...). Streams therefore do not depend on the order
//! in which work is scheduled, so parallel and sequential runs agree bitwise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `seed` and a label.
pub fn derive(seed: u64, label: u64) -> u64 {
    mix(mix(seed.wrapping_add(GOLDEN)) ^ label.wrapping_mul(GOLDEN).wrapping_add(1))
}

/// Derives a child seed along a path of labels.
pub fn derive_path(seed: u64, labels: &[u64]) -> u64 {
    labels.iter().fold(seed, |s, &l| derive(s, l))
}

pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
