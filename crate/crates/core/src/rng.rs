//! Deterministic RNG stream derivation.
//!
//! Every random draw in the crate comes from a ChaCha8 generator keyed by an
//! explicit `(seed, stream)` pair, so independent components (environment
//! rounds, per-layer samplers, split shuffles) get decorrelated streams that
//! are reproducible across platforms and call orders.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for stream `stream` of the base seed `seed`.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// SplitMix64 finalizer; combines ids into stream numbers without collisions
/// between small consecutive values.
pub(crate) fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
