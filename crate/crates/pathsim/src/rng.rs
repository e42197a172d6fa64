//! Deterministic random streams.
//!
//! Every stochastic operation takes an explicit `Stream`. Sub-streams are
//! derived by hashing a master seed together with a label path, so a sweep
//! evaluated on one thread or many produces identical draws per grid point.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type Stream = ChaCha8Rng;

/// Root stream for a master seed.
pub fn master_stream(seed: u64) -> Stream {
    derive_stream(seed, &[])
}

/// Stream keyed by `(seed, path)`. The path is a sequence of indices
/// identifying a grid point or a tree; distinct paths give statistically
/// independent streams.
pub fn derive_stream(seed: u64, path: &[u64]) -> Stream {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    for part in path {
        hasher.update(part.to_le_bytes());
    }
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}

/// A derived u64 seed, for APIs that take plain seeds.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    for part in path {
        hasher.update(part.to_le_bytes());
    }
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}
