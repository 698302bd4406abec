//! Deterministic seed derivation for independent Monte Carlo tasks.
//!
//! Every replicate, subsample or Monte Carlo world gets its own generator
//! seeded from `(master, index)`, so results do not depend on how tasks are
//! scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TaskRng = ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `mix64(master ^ mix64(index))`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(master ^ mix64(index))
}

pub fn task_rng(master: u64, index: u64) -> TaskRng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, index))
}
