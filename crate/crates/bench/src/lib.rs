//! Shared fixtures for the criterion benchmarks.

use lamocs_core::seed::splitmix64;
use lamocs_core::Placement;

/// A reproducible, generally infeasible placement of `n` VMs on `m` servers.
pub fn random_placement(n: usize, m: usize, seed: u64) -> Placement {
    let mut x = seed;
    Placement::new(
        (0..n)
            .map(|_| {
                x = splitmix64(x);
                (x % m as u64) as usize
            })
            .collect(),
    )
}
