//! Deterministic stream derivation for parallel sampling.
//!
//! Shard `s` of a run with seed `seed` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` switched to stream `s`. ChaCha streams
//! are independent 2^64-block sequences of the same keyed cipher, so shards
//! never overlap and the output does not depend on how shards are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Samples per shard; fixed so the batch is independent of thread count.
pub const SHARD_SIZE: usize = 8192;

pub fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

/// SplitMix64 finalizer, used to spread sweep seeds over sizes `n`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed used for size `n` in a sweep: `seed ^ splitmix64(n)`.
pub fn derive_seed(seed: u64, n: u64) -> u64 {
    seed ^ splitmix64(n)
}
