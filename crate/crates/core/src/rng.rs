//! Seeded randomness shared by fold assignment, k-means initialization and
//! plot jitter.
//!
//! All streams come from ChaCha8 seeded through `SeedableRng::seed_from_u64`,
//! which is specified bit-for-bit and independent of platform word size.
//! Shuffles use `SliceRandom::shuffle` (Fisher-Yates from the last index
//! down) and jitter uses `Rng::gen::<f64>()`, a uniform draw in [0, 1).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
