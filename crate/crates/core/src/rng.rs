//! Seed derivation.
//!
//! Every stochastic path takes one user seed. Independent streams (runs of a
//! sweep, Monte Carlo trials, subcommands) are split off with a salt and an
//! index through SplitMix64, so results never depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a, used to turn a salt string into a stream tag.
fn salt_hash(salt: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in salt.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Derive the seed of stream `index` under `salt` from a base seed.
pub fn derive_seed(base: u64, salt: &str, index: u64) -> u64 {
    splitmix64(splitmix64(base ^ salt_hash(salt)).wrapping_add(splitmix64(index)))
}

pub fn rng_from(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
