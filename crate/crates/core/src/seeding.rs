//! Seed derivation for replica streams.
//!
//! Every random object in the crate draws from a [`ChaCha8Rng`] seeded with a
//! single `u64`. Replica `r` of a run with master seed `m` uses the seed
//! `splitmix64(m + (r + 1) * 0x9E3779B97F4A7C15)`, so adding replicas never
//! changes the streams of earlier ones.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn replica_seed(master: u64, replica: u64) -> u64 {
    splitmix64(master.wrapping_add(replica.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
