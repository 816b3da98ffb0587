//! Reproducible per-replication random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifies the random stream of one Monte-Carlo replication.
///
/// The experiment seed is expanded into a 256-bit ChaCha key with
/// SplitMix64 and the replication index selects the ChaCha stream, so every
/// `(experiment_seed, replication_index)` pair maps to its own generator
/// and the mapping is identical on every platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeededStream {
    pub experiment_seed: u64,
    pub replication_index: u64,
}

impl SeededStream {
    pub fn new(experiment_seed: u64, replication_index: u64) -> Self {
        Self {
            experiment_seed,
            replication_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut state = self.experiment_seed;
        let mut key = [0u8; 32];
        for word in key.chunks_exact_mut(8) {
            word.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.replication_index);
        rng
    }
}

/// SplitMix64 step (Steele, Lea & Flood); a bijective 64-bit mixer.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
