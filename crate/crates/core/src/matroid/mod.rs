//! Matroid independence oracles, ranks, greedy linear optimization, the
//! `ℓ`-fold matroid union and the knapsack constraint.

mod explicit;
mod knapsack;
mod partition;
mod union;

use std::cmp::Ordering;

pub use explicit::{ExplicitMatroid, EXPLICIT_LIMIT};
pub use knapsack::KnapsackConstraint;
pub use partition::{PartitionMatroid, PartitionSpec, UniformMatroid};
pub use union::{UnionMatroid, UNION_FORMULA_LIMIT};

use crate::set::ElementSet;

/// Independence oracle of a matroid on `{0, .., n-1}`.
pub trait Matroid: Send + Sync {
    fn ground_size(&self) -> usize;

    fn is_independent(&self, set: &ElementSet) -> bool;

    /// Equivalent partition-matroid description, if there is one. Uniform and
    /// partition matroids provide it; their polytopes then have the closed form
    /// `{x in [0,1]^V : x(P_j) <= b_j}`.
    fn as_partition(&self) -> Option<PartitionMatroid> {
        None
    }
}

/// Size of a maximal independent subset of `set`, grown greedily in ascending
/// element order. Uses at most `|set|` oracle calls.
pub fn rank(m: &dyn Matroid, set: &ElementSet) -> usize {
    greedy_independent_subset(m, set).len()
}

/// Maximal independent subset of `set` built in ascending element order.
pub fn greedy_independent_subset(m: &dyn Matroid, set: &ElementSet) -> ElementSet {
    let mut acc = ElementSet::new();
    for e in set {
        let next = acc.with(e);
        if m.is_independent(&next) {
            acc = next;
        }
    }
    acc
}

/// Extends `start` (assumed independent) to a basis of `m`, trying elements in
/// ascending index order.
pub fn extend_to_basis(m: &dyn Matroid, start: &ElementSet) -> ElementSet {
    let mut acc = start.clone();
    for e in 0..m.ground_size() {
        if acc.contains(e) {
            continue;
        }
        let next = acc.with(e);
        if m.is_independent(&next) {
            acc = next;
        }
    }
    acc
}

/// Independent set maximizing `sum_{e in S} w_e`: elements are scanned by
/// decreasing weight (ties by ascending index) and kept when `w_e > 0` and
/// independence is preserved. The indicator of the result is an optimal vertex
/// of the matroid polytope.
pub fn max_weight_independent_set(m: &dyn Matroid, weights: &[f64]) -> ElementSet {
    let mut order: Vec<usize> = (0..weights.len()).filter(|&e| weights[e] > 0.0).collect();
    order.sort_by(|&a, &b| {
        weights[b]
            .partial_cmp(&weights[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut acc = ElementSet::new();
    for e in order {
        let next = acc.with(e);
        if m.is_independent(&next) {
            acc = next;
        }
    }
    acc
}

/// All independent sets, enumerated by depth-first search with downward-closure
/// pruning. Sets are produced in no particular order.
pub fn independent_sets(m: &dyn Matroid) -> Vec<ElementSet> {
    fn go(m: &dyn Matroid, current: &mut ElementSet, next: usize, out: &mut Vec<ElementSet>) {
        out.push(current.clone());
        for e in next..m.ground_size() {
            current.insert(e);
            if m.is_independent(current) {
                go(m, current, e + 1, out);
            }
            current.remove(e);
        }
    }
    let mut out = Vec::new();
    go(m, &mut ElementSet::new(), 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_rank() {
        let m = UniformMatroid::new(6, 3);
        let s: ElementSet = [0, 1, 2, 4, 5].into_iter().collect();
        assert_eq!(rank(&m, &s), 3);
    }

    #[test]
    fn partition_rank_of_part() {
        let m = PartitionMatroid::new(vec![vec![0, 1, 2], vec![3, 4]], vec![1, 2]).unwrap();
        let p1: ElementSet = [0, 1, 2].into_iter().collect();
        assert_eq!(rank(&m, &p1), 1);
    }

    #[test]
    fn rank_uses_at_most_set_size_calls() {
        use std::sync::atomic::{AtomicUsize, Ordering};
        struct Counting(UniformMatroid, AtomicUsize);
        impl Matroid for Counting {
            fn ground_size(&self) -> usize {
                self.0.ground_size()
            }
            fn is_independent(&self, s: &ElementSet) -> bool {
                self.1.fetch_add(1, Ordering::Relaxed);
                self.0.is_independent(s)
            }
        }
        let m = Counting(UniformMatroid::new(10, 4), AtomicUsize::new(0));
        let s: ElementSet = [1, 3, 5, 7, 9, 2].into_iter().collect();
        assert_eq!(rank(&m, &s), 4);
        assert!(m.1.load(Ordering::Relaxed) <= s.len());
    }

    #[test]
    fn max_weight_examples() {
        let m = UniformMatroid::new(3, 2);
        assert!(max_weight_independent_set(&m, &[-1.0, -2.0, -0.5]).is_empty());
        assert_eq!(
            max_weight_independent_set(&m, &[5.0, 1.0, 3.0]).to_vec(),
            vec![0, 2]
        );
        // zero weights are never selected; ties go to the smaller index
        assert_eq!(
            max_weight_independent_set(&m, &[0.0, 2.0, 2.0]).to_vec(),
            vec![1, 2]
        );
        let m1 = UniformMatroid::new(3, 1);
        assert_eq!(
            max_weight_independent_set(&m1, &[1.0, 4.0, 4.0]).to_vec(),
            vec![1]
        );
    }

    fn exhaustive_rank(m: &dyn Matroid, s: &ElementSet) -> usize {
        let elems = s.to_vec();
        (0..1u64 << elems.len())
            .map(|mask| {
                (0..elems.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| elems[i])
                    .collect::<ElementSet>()
            })
            .filter(|t| m.is_independent(t))
            .map(|t| t.len())
            .max()
            .unwrap()
    }

    #[test]
    fn explicit_rank_and_max_weight_match_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..30 {
            let n = 6 + trial % 5;
            let m = ExplicitMatroid::random_binary(n, 2 + trial % 3, &mut rng);
            let all = independent_sets(&m);
            for _ in 0..10 {
                let s: ElementSet = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
                assert_eq!(rank(&m, &s), exhaustive_rank(&m, &s));
                let w: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..2.0)).collect();
                let got = max_weight_independent_set(&m, &w);
                assert!(m.is_independent(&got));
                let value = |t: &ElementSet| t.iter().map(|e| w[e]).sum::<f64>();
                let best = all.iter().map(value).fold(f64::MIN, f64::max);
                assert!((value(&got) - best).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rank_is_monotone_submodular() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let n = 8;
            let m = ExplicitMatroid::random_binary(n, 3, &mut rng);
            let r: Vec<usize> = (0..1u64 << n)
                .map(|mask| rank(&m, &ElementSet::from_mask(mask)))
                .collect();
            for a in 0..1usize << n {
                for e in 0..n {
                    if a & (1 << e) != 0 {
                        continue;
                    }
                    let ga = r[a | 1 << e] - r[a];
                    for e2 in 0..n {
                        let b = a | 1 << e2;
                        if e2 == e || b == a {
                            continue;
                        }
                        assert!(r[b | 1 << e] >= r[b]);
                        assert!(ga >= r[b | 1 << e] - r[b]);
                    }
                }
            }
        }
    }

    #[test]
    fn enumerates_all_independent_sets() {
        let m = UniformMatroid::new(5, 2);
        assert_eq!(independent_sets(&m).len(), 1 + 5 + 10);
    }
}
