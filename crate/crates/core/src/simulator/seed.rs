//! Seed derivation for reproducible Monte Carlo runs.
//!
//! Episode `i` of a run with base seed `s` uses
//! `ChaCha8Rng::seed_from_u64(splitmix64(splitmix64(s) ^ i))`, where
//! `splitmix64` is the finalizer of Steele, Lea and Flood's SplitMix64
//! (`z += 0x9E3779B97F4A7C15; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9;
//! z = (z ^ z>>27) * 0x94D049BB133111EB; z ^ z>>31`). Every episode owns its
//! generator, so results do not depend on the order episodes are run in.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn episode_seed(base_seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(base_seed) ^ index)
}

pub fn episode_rng(base_seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(episode_seed(base_seed, index))
}
