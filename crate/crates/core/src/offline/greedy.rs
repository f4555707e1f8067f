use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;
use std::time::Instant;

use super::BiCriteriaSolution;
use crate::error::{Error, Result};
use crate::functions::Oracle;
use crate::matroid::Matroid;
use crate::set::ElementSet;

#[derive(Debug, Clone, Copy)]
struct Entry {
    key: f64,
    /// Already in the base set: taking it leaves the union unchanged.
    free: bool,
    e: usize,
    stamp: u64,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // Max-heap order: larger key first, then free elements, then smaller index.
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .total_cmp(&other.key)
            .then(self.free.cmp(&other.free))
            .then(other.e.cmp(&self.e))
    }
}

/// Lazy argmax over elements whose scores only shrink as the base set grows.
/// Stale keys are upper bounds, so a fresh key on top of the heap is the exact
/// argmax, with ties going to the smallest index.
pub(crate) struct LazyQueue {
    heap: BinaryHeap<Entry>,
    stamp: u64,
}

impl LazyQueue {
    pub(crate) fn new(keys: impl IntoIterator<Item = (usize, f64)>) -> Self {
        Self::with_free(keys, |_| false)
    }

    /// Ties on the key go to elements with `free(e)` before the index rule applies.
    pub(crate) fn with_free(
        keys: impl IntoIterator<Item = (usize, f64)>,
        free: impl Fn(usize) -> bool,
    ) -> Self {
        let heap = keys
            .into_iter()
            .map(|(e, key)| Entry {
                key,
                free: free(e),
                e,
                stamp: u64::MAX,
            })
            .collect();
        Self { heap, stamp: 0 }
    }

    /// Marks every stored key as stale; call after the base set changes.
    pub(crate) fn advance(&mut self) {
        self.stamp += 1;
    }

    /// Pops the best element. `keep(e)` may veto an element permanently before
    /// any score is computed; `score(e)` refreshes a stale key.
    pub(crate) fn pop_best(
        &mut self,
        mut keep: impl FnMut(usize) -> bool,
        mut score: impl FnMut(usize) -> f64,
    ) -> Option<(usize, f64)> {
        while let Some(top) = self.heap.pop() {
            if !keep(top.e) {
                continue;
            }
            if top.stamp == self.stamp {
                return Some((top.e, top.key));
            }
            self.heap.push(Entry {
                key: score(top.e),
                free: top.free,
                e: top.e,
                stamp: self.stamp,
            });
        }
        None
    }
}

/// One greedy layer: starting from an empty layer, repeatedly adds the feasible
/// element maximizing `f(base ∪ layer + e)` until no feasible element remains.
/// Among equal gains, elements of `base` win: once the gains hit zero the layer
/// is completed from the existing union instead of growing it.
/// `bounds` carries marginal upper bounds across layers.
fn greedy_layer(
    f: &Oracle,
    base: &ElementSet,
    bounds: &mut [f64],
    feasible: &dyn Fn(&ElementSet) -> bool,
) -> ElementSet {
    let mut layer = ElementSet::new();
    let mut current = base.clone();
    let mut value = f.eval(&current);
    let mut grown = vec![0.0; bounds.len()];
    let mut queue = LazyQueue::with_free(bounds.iter().copied().enumerate(), |e| base.contains(e));
    loop {
        let picked = queue.pop_best(
            |e| feasible(&layer.with(e)),
            |e| {
                grown[e] = f.eval(&current.with(e));
                bounds[e] = grown[e] - value;
                bounds[e]
            },
        );
        let Some((e, _)) = picked else { break };
        layer.insert(e);
        if !current.contains(e) {
            current.insert(e);
            value = grown[e];
            queue.advance();
        }
    }
    layer
}

pub(crate) fn layered_greedy(
    f: &Oracle,
    ell: usize,
    feasible: &dyn Fn(&ElementSet) -> bool,
) -> Result<Vec<ElementSet>> {
    if ell == 0 {
        return Err(Error::param("extended greedy needs ell >= 1"));
    }
    let n = f.ground_size();
    let mut bounds = vec![f64::INFINITY; n];
    let mut union = ElementSet::new();
    let mut layers = Vec::with_capacity(ell);
    for _ in 0..ell {
        let layer = greedy_layer(f, &union, &mut bounds, feasible);
        union.union_with(&layer);
        layers.push(layer);
    }
    Ok(layers)
}

/// `ℓ` rounds of greedy; round `τ` builds a basis `S_τ` of `m` by repeatedly adding
/// the element maximizing `f(S_1 ∪ .. ∪ S_τ + e)`. Ties go to elements already in
/// the union, then to the smallest index.
/// For monotone submodular `f`, `f(∪ S_τ) >= (1 - 2^-ℓ) max_{S ∈ I} f(S)`.
pub fn extended_greedy(f: &Oracle, m: &dyn Matroid, ell: usize) -> Result<BiCriteriaSolution> {
    let start = Instant::now();
    let before = f.call_count();
    check_ground(f, m.ground_size())?;
    let layers = layered_greedy(f, ell, &|s| m.is_independent(s))?;
    Ok(BiCriteriaSolution::assemble(
        layers,
        std::slice::from_ref(f),
        None,
        ell,
        before,
        start,
    ))
}

/// Extended greedy where a layer must be independent in every matroid; each
/// round is then a `1/(r+1)` approximation of the remaining gap.
pub fn extended_greedy_intersection(
    f: &Oracle,
    matroids: &[Arc<dyn Matroid>],
    ell: usize,
) -> Result<BiCriteriaSolution> {
    if matroids.is_empty() {
        return Err(Error::param(
            "matroid intersection needs at least one matroid",
        ));
    }
    let start = Instant::now();
    let before = f.call_count();
    for m in matroids {
        check_ground(f, m.ground_size())?;
    }
    let layers = layered_greedy(f, ell, &|s| matroids.iter().all(|m| m.is_independent(s)))?;
    Ok(BiCriteriaSolution::assemble(
        layers,
        std::slice::from_ref(f),
        None,
        ell,
        before,
        start,
    ))
}

pub(crate) fn check_ground(f: &Oracle, n: usize) -> Result<()> {
    if f.ground_size() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f.ground_size(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{Coverage, Modular};
    use crate::matroid::{PartitionMatroid, UniformMatroid};

    #[test]
    fn modular_uniform_one_layer_is_top_b() {
        let f = Oracle::new(Modular::new(vec![3.0, 9.0, 1.0, 7.0, 7.0]).unwrap());
        let m = UniformMatroid::new(5, 3);
        let sol = extended_greedy(&f, &m, 1).unwrap();
        assert_eq!(sol.union.to_vec(), vec![1, 3, 4]);
        assert_eq!(sol.per_objective_values, vec![23.0]);
    }

    #[test]
    fn layers_are_bases_and_may_overlap() {
        // Two elements worth anything; the second layer must still be a basis.
        let f = Oracle::new(Modular::new(vec![5.0, 4.0, 0.0, 0.0]).unwrap());
        let m = UniformMatroid::new(4, 2);
        let sol = extended_greedy(&f, &m, 2).unwrap();
        assert_eq!(sol.layers[0].to_vec(), vec![0, 1]);
        assert_eq!(sol.layers[1].len(), 2);
        assert_eq!(sol.layers[1].to_vec(), vec![0, 1]);
    }

    #[test]
    fn partition_layers_respect_parts() {
        let covers = vec![vec![0, 1], vec![1, 2], vec![3], vec![0, 3, 4], vec![5]];
        let f = Oracle::new(Coverage::unweighted(covers, 6).unwrap());
        let m = PartitionMatroid::new(vec![vec![0, 1, 2], vec![3, 4]], vec![1, 1]).unwrap();
        let sol = extended_greedy(&f, &m, 2).unwrap();
        for l in &sol.layers {
            assert!(m.is_independent(l));
            assert_eq!(l.len(), 2);
        }
        assert_eq!(sol.per_objective_values[0], 6.0);
    }

    #[test]
    fn rejects_zero_layers() {
        let f = Oracle::new(Modular::new(vec![1.0]).unwrap());
        assert!(extended_greedy(&f, &UniformMatroid::new(1, 1), 0).is_err());
        assert!(extended_greedy_intersection(&f, &[], 1).is_err());
    }
}
