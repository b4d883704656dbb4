//! Seeded, counter-based random streams.
//!
//! Every stochastic routine draws from a ChaCha stream addressed by
//! `(seed, stream)`. Distinct streams never overlap, so work split across
//! threads produces the same numbers regardless of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream used for projection directions.
pub const STREAM_PROJECTIONS: u64 = 0;
/// Stream used for multivariate normal reference samples.
pub const STREAM_MVNORM: u64 = 1;
/// Base of the per-resample bootstrap streams.
pub const STREAM_BOOTSTRAP_BASE: u64 = 1 << 32;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
