//! Seeded randomness.
//!
//! Every random draw in the crate flows from an explicit `u64` seed. Streams
//! are ChaCha8 generators ([`SimRng`]). Child seeds are derived from a parent
//! seed and a path of labels with the SplitMix64 finaliser, so a stream only
//! depends on its own derivation path: adding sibling streams never shifts an
//! existing one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for all simulation randomness.
pub type SimRng = ChaCha8Rng;

/// Creates the generator for `seed`.
pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `parent` by folding in `labels` one at a time.
pub fn derive_seed(parent: u64, labels: &[u64]) -> u64 {
    labels.iter().fold(splitmix64(parent), |acc, &label| {
        splitmix64(acc ^ splitmix64(label))
    })
}

/// Stream labels used when deriving seeds.
pub mod stream {
    pub const NETWORK: u64 = 0x6e65_7477;
    pub const LANDSCAPE: u64 = 0x6c61_6e64;
    pub const TRAIT_NODES: u64 = 0x7472_6169;
    pub const REPLICATE: u64 = 0x7265_706c;
    pub const DYNAMICS: u64 = 0x6479_6e61;
}
