//! Seeded synthetic data and brute-force reference implementations.
//!
//! Nothing here calls into `tailnet`: the samplers carry their own zeta
//! normalizer and the graph oracles work on dense matrices, so they stay
//! independent of the code paths they check.

pub mod fixtures;
pub mod graphs;
pub mod samplers;

pub use rand;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
