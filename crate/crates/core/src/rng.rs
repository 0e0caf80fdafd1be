//! Deterministic random streams.
//!
//! Every simulation draws from a single ChaCha8 stream seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`, so a run is a pure function of its
//! config, initial lattice and seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An independent stream under the same seed, for draws that must not
/// disturb the main simulation stream (random initial lattices, for example).
pub fn seeded_stream(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// 64-bit FNV-1a digest rendered as hex, used to tag trajectories with their config.
pub fn digest(text: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    format!("{h:016x}")
}
