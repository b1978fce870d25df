//! Seeded random streams.
//!
//! Every random quantity in the crate comes from a ChaCha8 generator keyed by
//! a 64-bit seed. Independent tasks (trials, iteration blocks) get their own
//! stream of the same key, so results do not depend on how work is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

/// Generator for `(seed, stream)`.
pub fn stream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generator for stream 0 of `seed`.
pub fn seeded(seed: u64) -> SeededRng {
    stream(seed, 0)
}
