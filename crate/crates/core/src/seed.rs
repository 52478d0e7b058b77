//! Counter-based seed derivation.
//!
//! Every random stream is keyed by the master seed and a path of integers
//! (repeat number, role, vector index, ...), so a value depends only on its
//! key and never on the order in which streams are consumed. Serial and
//! parallel runs therefore draw identical randomness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mix a master seed with a key path into a child seed.
pub fn derive(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix(master), |acc, &k| splitmix(acc ^ splitmix(k)))
}

/// A ChaCha stream for the given key path.
pub fn stream(master: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, path))
}

/// Stream labels used across the crate.
pub mod label {
    pub const FIELD: u64 = 1;
    pub const PERMUTATION: u64 = 2;
    pub const SCALAR_F: u64 = 3;
    pub const SCALAR_G: u64 = 4;
    pub const SCALAR_H: u64 = 5;
    pub const REPEAT: u64 = 6;
}
