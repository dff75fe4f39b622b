//! Deterministic seeding policy.
//!
//! Every randomized operation in this crate is a pure function of its `u64`
//! seed. The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`), a documented,
//! platform-independent stream cipher RNG; `seed_from_u64` expands the seed
//! through SplitMix64, so nearby seeds produce unrelated streams.
//!
//! Two derivation rules are used:
//!
//! * **column substreams** — within one matrix construction, column `c` draws
//!   from `seed ^ c`. Column indices are distinct, so substreams never
//!   collide inside a matrix, and generation parallelizes without changing
//!   output.
//! * **nested streams** (per-trial, per-dimension, per-attempt) — derived via
//!   [`derive_seed`], which mixes the child index through SplitMix64 before
//!   combining. Plain XOR chains at multiple levels could collide
//!   (`s ^ i ^ j == s ^ j ^ i`); the mix breaks that symmetry.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer. Public domain algorithm (Steele, Lea, Flood 2014).
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Derive an independent child seed from `(seed, stream)`.
///
/// Deterministic and collision-resistant across nesting levels; used for
/// per-trial and per-attempt streams so that results are independent of
/// execution schedule.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream))
}

/// RNG for column `col` of a matrix built from `seed`.
pub fn column_rng(seed: u64, col: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ col as u64)
}

/// RNG for a scalar stream (no substructure).
pub fn stream_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::RngCore;

    #[test]
    fn column_streams_are_reproducible() {
        let mut a = column_rng(42, 3);
        let mut b = column_rng(42, 3);
        assert_eq!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn column_streams_differ_by_column() {
        let mut a = column_rng(42, 0);
        let mut b = column_rng(42, 1);
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn derived_seeds_break_xor_symmetry() {
        // trial i, column j must not alias trial j, column i
        let a = derive_seed(7, 3) ^ 5;
        let b = derive_seed(7, 5) ^ 3;
        assert_ne!(a, b);
    }

    #[test]
    fn splitmix_reference_values() {
        // first three outputs of the splitmix64 sequence from seed 0,
        // cross-checked against the published reference implementation
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(0x9E37_79B9_7F4A_7C15), 0x6E78_9E6A_A1B9_65F4);
    }
}
