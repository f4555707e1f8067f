use std::collections::VecDeque;
use std::sync::Arc;

use super::{rank, Matroid, PartitionMatroid};
use crate::error::{Error, Result};
use crate::set::ElementSet;

/// Largest `|S|` for which [`UnionMatroid::rank_formula`] enumerates subsets.
pub const UNION_FORMULA_LIMIT: usize = 20;

/// `M_ℓ`: a set is independent iff it splits into `ℓ` independent sets of `base`.
#[derive(Clone)]
pub struct UnionMatroid {
    base: Arc<dyn Matroid>,
    ell: usize,
    partition: Option<PartitionMatroid>,
}

impl std::fmt::Debug for UnionMatroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UnionMatroid")
            .field("n", &self.base.ground_size())
            .field("ell", &self.ell)
            .field("partition", &self.partition.is_some())
            .finish()
    }
}

impl UnionMatroid {
    pub fn new(base: Arc<dyn Matroid>, ell: usize) -> Result<Self> {
        if ell == 0 {
            return Err(Error::param("union matroid needs ell >= 1"));
        }
        let partition = base.as_partition();
        Ok(Self {
            base,
            ell,
            partition,
        })
    }

    pub fn base(&self) -> &Arc<dyn Matroid> {
        &self.base
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Splits `set` into `ℓ` base-independent layers, or returns `None` if `set`
    /// is dependent in `M_ℓ`. Layers may be empty.
    pub fn union_is_independent(&self, set: &ElementSet) -> Option<Vec<ElementSet>> {
        if set.bound() > self.base.ground_size() {
            return None;
        }
        if self.ell == 1 {
            return self.base.is_independent(set).then(|| vec![set.clone()]);
        }
        match &self.partition {
            Some(p) => self.partition_witness(p, set),
            None => self.augmenting_witness(set),
        }
    }

    /// Round-robin within each part: the `c`-th element of `P_j ∩ S` goes to
    /// layer `c mod ℓ`, so every layer holds at most `⌈|S ∩ P_j| / ℓ⌉ <= b_j`.
    fn partition_witness(&self, p: &PartitionMatroid, set: &ElementSet) -> Option<Vec<ElementSet>> {
        let counts = p.counts(set);
        if counts
            .iter()
            .zip(p.budgets())
            .any(|(&c, &b)| c > self.ell * b)
        {
            return None;
        }
        let mut seen = vec![0usize; counts.len()];
        let mut layers = vec![ElementSet::new(); self.ell];
        for e in set {
            let j = p.part_of(e);
            layers[seen[j] % self.ell].insert(e);
            seen[j] += 1;
        }
        Some(layers)
    }

    /// Matroid partitioning by shortest augmenting paths: elements are inserted one
    /// at a time, each insertion searching the exchange graph breadth-first.
    fn augmenting_witness(&self, set: &ElementSet) -> Option<Vec<ElementSet>> {
        let mut layers = vec![ElementSet::new(); self.ell];
        let mut owner = vec![usize::MAX; self.base.ground_size()];
        for x in set {
            if !self.augment(&mut layers, &mut owner, x) {
                return None;
            }
        }
        debug_assert!(layers.iter().all(|l| self.base.is_independent(l)));
        Some(layers)
    }

    fn augment(&self, layers: &mut [ElementSet], owner: &mut [usize], x: usize) -> bool {
        let n = owner.len();
        // pred[y] = (element that displaces y, layer y is displaced from)
        let mut pred: Vec<Option<usize>> = vec![None; n];
        let mut visited = vec![false; n];
        visited[x] = true;
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            for j in 0..self.ell {
                if owner[u] == j {
                    continue;
                }
                let grown = layers[j].with(u);
                if self.base.is_independent(&grown) {
                    // Walk back: u enters j, each predecessor takes its successor's old slot.
                    let mut cur = u;
                    let mut target = j;
                    loop {
                        let from = owner[cur];
                        if from != usize::MAX {
                            layers[from].remove(cur);
                        }
                        layers[target].insert(cur);
                        owner[cur] = target;
                        match pred[cur] {
                            Some(p) => {
                                target = from;
                                cur = p;
                            }
                            None => break,
                        }
                    }
                    return true;
                }
                for y in layers[j].to_vec() {
                    if visited[y] {
                        continue;
                    }
                    if self.base.is_independent(&grown.without(y)) {
                        visited[y] = true;
                        pred[y] = Some(u);
                        queue.push_back(y);
                    }
                }
            }
        }
        false
    }

    /// `min_{A ⊆ S} |S \ A| + ℓ·r(A)` by enumeration, which is the `M_ℓ` rank of `S`.
    pub fn rank_formula(&self, set: &ElementSet) -> Result<usize> {
        let elems = set.to_vec();
        if elems.len() > UNION_FORMULA_LIMIT {
            return Err(Error::SizeLimit {
                what: "union rank formula",
                size: elems.len(),
                limit: UNION_FORMULA_LIMIT,
            });
        }
        let mut best = usize::MAX;
        for mask in 0..1u64 << elems.len() {
            let a: ElementSet = (0..elems.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| elems[i])
                .collect();
            best = best.min(elems.len() - a.len() + self.ell * rank(self.base.as_ref(), &a));
        }
        Ok(best)
    }
}

impl Matroid for UnionMatroid {
    fn ground_size(&self) -> usize {
        self.base.ground_size()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        self.union_is_independent(set).is_some()
    }

    fn as_partition(&self) -> Option<PartitionMatroid> {
        self.partition.as_ref().map(|p| p.scaled(self.ell))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{ExplicitMatroid, UniformMatroid};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_witness(u: &UnionMatroid, s: &ElementSet, layers: &[ElementSet]) {
        assert!(layers.len() <= u.ell());
        let mut all = ElementSet::new();
        for l in layers {
            assert!(u.base().is_independent(l));
            assert!(l.intersection(&all).is_empty());
            all.union_with(l);
        }
        assert_eq!(&all, s);
    }

    #[test]
    fn ell_one_delegates() {
        let u = UnionMatroid::new(Arc::new(UniformMatroid::new(5, 2)), 1).unwrap();
        assert!(u.is_independent(&[0, 1].into_iter().collect()));
        assert!(!u.is_independent(&[0, 1, 2].into_iter().collect()));
    }

    #[test]
    fn uniform_two_by_two() {
        let u = UnionMatroid::new(Arc::new(UniformMatroid::new(6, 2)), 2).unwrap();
        let s: ElementSet = [0, 2, 3, 5].into_iter().collect();
        let w = u.union_is_independent(&s).unwrap();
        check_witness(&u, &s, &w);
        assert!(w.iter().all(|l| l.len() == 2));
        assert!(!u.is_independent(&[0, 1, 2, 3, 4].into_iter().collect()));
    }

    #[test]
    fn partition_agrees_with_rank_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let m = PartitionMatroid::new(
            vec![vec![0, 1, 2, 3], vec![4, 5, 6], vec![7, 8]],
            vec![1, 1, 2],
        )
        .unwrap();
        let u = UnionMatroid::new(Arc::new(m.clone()), 3).unwrap();
        for _ in 0..300 {
            let s: ElementSet = (0..9).filter(|_| rng.gen_bool(0.6)).collect();
            let by_formula = u.rank_formula(&s).unwrap() >= s.len();
            let by_counts = m
                .counts(&s)
                .iter()
                .zip(m.budgets())
                .all(|(&c, &b)| c <= 3 * b);
            let witness = u.union_is_independent(&s);
            assert_eq!(witness.is_some(), by_formula);
            assert_eq!(by_formula, by_counts);
            if let Some(w) = witness {
                check_witness(&u, &s, &w);
            }
        }
    }

    #[test]
    fn augmenting_paths_agree_with_rank_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for trial in 0..60 {
            let n = 6 + trial % 5;
            let base = Arc::new(ExplicitMatroid::random_binary(n, 2 + trial % 3, &mut rng));
            let ell = 1 + trial % 3;
            let u = UnionMatroid::new(base, ell).unwrap();
            for _ in 0..20 {
                let s: ElementSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
                let formula = u.rank_formula(&s).unwrap();
                match u.union_is_independent(&s) {
                    Some(w) => {
                        assert!(formula >= s.len());
                        check_witness(&u, &s, &w);
                    }
                    None => assert!(formula < s.len()),
                }
            }
        }
    }

    #[test]
    fn exposes_scaled_partition() {
        let m = PartitionMatroid::new(vec![vec![0, 1], vec![2]], vec![1, 1]).unwrap();
        let u = UnionMatroid::new(Arc::new(m), 3).unwrap();
        assert_eq!(u.as_partition().unwrap().budgets(), &[3, 3]);
    }

    #[test]
    fn rejects_zero_ell() {
        assert!(UnionMatroid::new(Arc::new(UniformMatroid::new(2, 1)), 0).is_err());
    }
}
