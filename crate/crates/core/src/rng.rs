//! Seed derivation for reproducible batches.
//!
//! Every stochastic stage draws from its own ChaCha8 stream. The stream seed
//! is a SplitMix64 mix of `(master seed, run index, stage tag)`, so adding a
//! classifier or a stage never shifts the random numbers another stage sees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used everywhere in the crate.
pub type Rng = ChaCha8Rng;

/// Stage tags mixed into derived seeds.
pub mod stage {
    pub const CASCADE: u64 = 0x01;
    pub const OBSERVE: u64 = 0x02;
    pub const FIT: u64 = 0x03;
    pub const PREDICT: u64 = 0x04;
    pub const GENERATE: u64 = 0x05;
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Derive the seed for one `(run, stage)` substream of a master seed.
pub fn derive_seed(master: u64, run: u64, stage: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ run) ^ stage.rotate_left(32))
}

/// A generator seeded directly from `seed`.
pub fn from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A generator for one `(run, stage)` substream of `master`.
pub fn substream(master: u64, run: u64, stage: u64) -> Rng {
    from_seed(derive_seed(master, run, stage))
}
