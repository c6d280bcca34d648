//! Seeded randomness shared by every randomized routine.
//!
//! All randomized algorithms take a [`Rng`] built from one 64-bit seed, so a
//! run is reproducible from the seed alone.

use rand::SeedableRng;

/// The generator used throughout the crate.
pub type Rng = rand_xoshiro::SplitMix64;

/// Name of the environment variable consulted for a default seed.
pub const SEED_ENV: &str = "NILSUB_SEED";

/// A generator for the given seed.
pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// The seed from `NILSUB_SEED`, or 0 when unset or unparsable.
pub fn default_seed() -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(0)
}

/// Derives an independent seed for a numbered sub-task.
pub fn derive(seed: u64, index: u64) -> u64 {
    use rand::RngCore;
    let mut r = seeded(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    r.next_u64()
}
