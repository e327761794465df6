//! Splittable seeded RNG streams.
//!
//! Every replication derives its generators from a [`StreamKey`] built by
//! chaining child labels off a master seed, e.g.
//! `StreamKey::root(seed).child(policy_index).child(run_index)`. Two keys with
//! different paths yield statistically independent ChaCha streams, so
//! replications can run in any order (or in parallel) and still reproduce
//! bit-identical results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer; good avalanche, not cryptographic.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A 256-bit key identifying one RNG stream in a derivation tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamKey {
    words: [u64; 4],
}

impl StreamKey {
    /// Key at the root of the derivation tree for a master seed.
    pub fn root(master: u64) -> StreamKey {
        let mut words = [0u64; 4];
        let mut state = master;
        for w in &mut words {
            state = state.wrapping_add(GOLDEN_GAMMA);
            *w = mix(state);
        }
        StreamKey { words }
    }

    /// Derive the child stream with the given label.
    pub fn child(&self, label: u64) -> StreamKey {
        let mut words = self.words;
        for (i, w) in words.iter_mut().enumerate() {
            let salt = mix(label.wrapping_add(GOLDEN_GAMMA.wrapping_mul(i as u64 + 1)));
            *w = mix(*w ^ salt);
        }
        StreamKey { words }
    }

    /// Instantiate the generator for this key.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        for (i, w) in self.words.iter().enumerate() {
            seed[i * 8..(i + 1) * 8].copy_from_slice(&w.to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}
