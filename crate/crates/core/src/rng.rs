//! Seeded RNG substreams.
//!
//! Every row of a batch draws from its own ChaCha stream selected by the row
//! index, so results do not depend on how rows are spread over threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Independent stream `index` under the global `seed`.
pub fn substream(seed: u64, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
