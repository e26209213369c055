//! Seeded random streams. Every random draw in the crate comes from a
//! `(seed, stream)` pair, so results do not depend on evaluation order or
//! thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream families, so that unrelated consumers of one seed never overlap.
pub(crate) mod family {
    pub const RANDOM_PAIRS: u64 = 1 << 40;
    pub const GAUSS_PAIRS: u64 = 3 << 40;
    pub const SEARCH: u64 = 4 << 40;
    pub const GENERICITY: u64 = 5 << 40;
}
