//! Counter-based random streams.
//!
//! Every random draw in the crate is addressed by `(seed, index)` pairs so
//! that trial `i` sees the same numbers whichever thread runs it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent child seed from `(seed, tag)`.
#[inline]
pub fn derive(seed: u64, tag: u64) -> u64 {
    mix64(mix64(seed ^ GOLDEN).wrapping_add(tag.wrapping_mul(GOLDEN)) ^ 0x5851_f42d_4c95_7f2d)
}

/// Uniform variate in `[0, 1)` that is a pure function of `(seed, index)`.
#[inline]
pub fn unit(seed: u64, index: u64) -> f64 {
    let bits = mix64(seed.wrapping_add(mix64(index.wrapping_add(1).wrapping_mul(GOLDEN))));
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Seed for trial `trial` of a Monte Carlo run keyed by `seed`.
#[inline]
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    derive(seed, trial)
}

/// A full-featured generator for sequential sampling within one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, trial))
}

/// Hashes a string label into a tag usable with [`derive`].
pub fn label(tag: &str) -> u64 {
    tag.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    })
}
