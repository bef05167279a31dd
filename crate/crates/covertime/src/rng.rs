//! Seed derivation and the crate's reproducible RNG.
//!
//! All randomness flows through [`ChaCha8Rng`], whose output stream is
//! specified by the cipher and therefore identical across platforms and
//! library versions. Parallel work never shares an RNG: each unit of work
//! (a trial, a probe walk, a generator) gets its own generator seeded
//! through [`derive_seed`], so serial and parallel execution consume
//! exactly the same random streams.

use rand::SeedableRng;
// Re-exported so callers can name the type [`rng_for`] returns.
pub use rand_chacha::ChaCha8Rng;

/// One round of the splitmix64 output function.
#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent seed from a master seed and two stream indices.
///
/// `lane` and `index` address a two-level hierarchy (for example: start
/// index, then trial index). Distinct `(master, lane, index)` triples map
/// to well-separated seeds; the same triple always maps to the same seed.
#[must_use]
pub fn derive_seed(master: u64, lane: u64, index: u64) -> u64 {
    let mut state = master;
    let a = splitmix64(&mut state);
    state ^= lane.wrapping_mul(0xA24B_AED4_963E_E407);
    let b = splitmix64(&mut state);
    state ^= index.wrapping_mul(0x9FB2_1C65_1E98_DF25);
    let c = splitmix64(&mut state);
    a ^ b.rotate_left(17) ^ c
}

/// The RNG for one derived stream.
#[must_use]
pub fn rng_for(master: u64, lane: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, lane, index))
}

/// The RNG for a bare seed (single-stream uses: generators, shuffles).
#[must_use]
pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
