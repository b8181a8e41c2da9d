//! Seeded randomness plumbing.
//!
//! Every random draw in the crate goes through a [`SeededRng`] handed in by the
//! caller. Trial loops derive one generator per trial with [`derive_seed`], so
//! changing the number of trials never perturbs the earlier ones.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type SeededRng = ChaCha20Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer applied to `master ^ (index * golden_gamma)`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_rng(master: u64, index: u64) -> SeededRng {
    seeded(derive_seed(master, index))
}
