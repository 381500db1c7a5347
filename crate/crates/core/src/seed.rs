//! Deterministic seed splitting.
//!
//! Every random stream in the crate is a `ChaCha8Rng` seeded from a base seed
//! mixed with a stream tag and an index, so that cells, runs and nodes are
//! reproducible independently of evaluation order or worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Derive a child seed from `base` for the given stream tag and index.
pub fn derive_seed(base: u64, stream: &str, index: u64) -> u64 {
    let mut h = splitmix64(base);
    for b in stream.bytes() {
        h = splitmix64(h ^ u64::from(b));
    }
    splitmix64(h ^ splitmix64(index))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
