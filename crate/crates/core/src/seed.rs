//! Counter-based seeding.
//!
//! Every random decision in the crate is a pure function of a 64-bit key and
//! a counter, so results do not depend on iteration order or on how work is
//! split across threads.
//!
//! The mixing function is the SplitMix64 output stage:
//!
//! ```text
//! z = x + 0x9E3779B97F4A7C15
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! mix64(x) = z ^ (z >> 31)
//! ```
//!
//! (all arithmetic wrapping mod 2^64) and two words are combined as
//! `combine(key, v) = mix64(key ^ mix64(v))`.
//!
//! * per-trial seed: `combine(combine(master_seed, N), trial_index)`
//! * inclusion of element `i` under seed `s`: `unit(combine(s, i)) < alpha`,
//!   where `unit(u) = (u >> 11) * 2^-53` is uniform on `[0, 1)`.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
pub fn combine(key: u64, value: u64) -> u64 {
    mix64(key ^ mix64(value))
}

/// Maps a 64-bit word to a double uniform on `[0, 1)` using the top 53 bits.
#[inline]
pub fn unit(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Seed for one Monte Carlo trial.
#[inline]
pub fn trial_seed(master_seed: u64, n: u64, trial_index: u64) -> u64 {
    combine(combine(master_seed, n), trial_index)
}
