//! Stable seed derivation for reproducible experiment sweeps.
//!
//! Seeds are mixed with SplitMix64 so the mapping never depends on the
//! standard library's hasher, which is not stable across releases.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a sequence of words into one 64-bit seed.
pub fn hash64(parts: &[u64]) -> u64 {
    parts.iter().fold(splitmix64(parts.len() as u64), |acc, &p| {
        splitmix64(acc ^ splitmix64(p))
    })
}

/// Seed of one sweep run: `hash64(base_seed, vm_count, algorithm_id, rep)`.
pub fn run_seed(base_seed: u64, vm_count: usize, algorithm_id: u64, rep: usize) -> u64 {
    hash64(&[base_seed, vm_count as u64, algorithm_id, rep as u64])
}
