//! Counter-keyed random streams.
//!
//! Every (seed, shot, source, atom) tuple owns an independent ChaCha8 stream, so a
//! shot's draws never depend on which worker ran it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Which physical error a stream feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum StreamSource {
    Momentum = 1,
    StatePrep = 2,
    PulseArea = 3,
    LaserPhase = 4,
    Detection = 5,
    Spontaneous = 6,
    Loss = 7,
    Projection = 8,
}

/// Atom index used for draws shared by the whole ensemble.
pub const SHARED: u64 = u64::MAX;

pub fn stream(seed: u64, shot: u64, source: StreamSource, atom: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&shot.to_le_bytes());
    key[16..24].copy_from_slice(&(source as u64).to_le_bytes());
    key[24..].copy_from_slice(&atom.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
