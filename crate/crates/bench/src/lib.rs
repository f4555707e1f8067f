//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use robustsub::functions::FacilityLocation;
use robustsub::harness::{generate_synthetic_ratings, ExperimentConfig, MAX_RATING};
use robustsub::matroid::PartitionMatroid;
use robustsub::{ElementSet, Oracle};

/// Facility location on synthetic ratings with `n` items and `users` users.
pub fn facility_location(n: usize, users: usize, seed: u64) -> Oracle {
    let cfg = ExperimentConfig {
        n,
        num_users: users,
        sparsity: 0.2,
        ..ExperimentConfig::desk_scale()
    };
    Oracle::new(FacilityLocation::new(generate_synthetic_ratings(&cfg, seed), MAX_RATING).unwrap())
}

/// `q` contiguous parts of `n` elements, budget `b` each.
pub fn contiguous_partition(n: usize, q: usize, b: usize) -> Arc<PartitionMatroid> {
    let parts: Vec<Vec<usize>> = (0..q)
        .map(|j| (j * n / q..(j + 1) * n / q).collect())
        .collect();
    Arc::new(PartitionMatroid::new(parts, vec![b; q]).unwrap())
}

/// The `i`-th of the disjoint bases `{j·n/q + i·b + t : t < b}` of [`contiguous_partition`].
pub fn disjoint_basis(n: usize, q: usize, b: usize, i: usize) -> ElementSet {
    (0..q)
        .flat_map(|j| (0..b).map(move |t| j * n / q + i * b + t))
        .collect()
}
