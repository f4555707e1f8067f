//! Reference oracles and generators shared by the integration tests. Nothing
//! here calls the solvers under test.
#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use robustsub::functions::{Coverage, FacilityLocation, Scaled};
use robustsub::matroid::{ExplicitMatroid, PartitionMatroid, UniformMatroid};
use robustsub::{ElementSet, Matroid, Oracle};

pub fn mask_set(mask: u64) -> ElementSet {
    ElementSet::from_mask(mask)
}

/// `max_{S feasible} min_i f_i(S)` by scanning every bitmask.
pub fn brute_max_min(
    objectives: &[Oracle],
    n: usize,
    feasible: impl Fn(&ElementSet) -> bool,
) -> (f64, ElementSet) {
    let mut best = (f64::NEG_INFINITY, ElementSet::new());
    for mask in 0..1u64 << n {
        let s = mask_set(mask);
        if !feasible(&s) {
            continue;
        }
        let v = objectives
            .iter()
            .map(|f| f.eval(&s))
            .fold(f64::INFINITY, f64::min);
        if v > best.0 {
            best = (v, s);
        }
    }
    best
}

/// `Σ_S Pr[S] f(S)` with `Pr[S] = Π_{e∈S} y_e Π_{e∉S} (1-y_e)`.
pub fn multilinear_naive(f: impl Fn(&ElementSet) -> f64, y: &[f64]) -> f64 {
    let n = y.len();
    let mut total = 0.0;
    for mask in 0..1u64 << n {
        let mut p = 1.0;
        for (e, &ye) in y.iter().enumerate() {
            p *= if mask >> e & 1 == 1 { ye } else { 1.0 - ye };
        }
        if p != 0.0 {
            total += p * f(&mask_set(mask));
        }
    }
    total
}

/// Central differences of a multilinear extension in every coordinate.
pub fn multilinear_gradient_naive(f: impl Fn(&ElementSet) -> f64 + Copy, y: &[f64]) -> Vec<f64> {
    (0..y.len())
        .map(|e| {
            let mut hi = y.to_vec();
            hi[e] = 1.0;
            let mut lo = y.to_vec();
            lo[e] = 0.0;
            multilinear_naive(f, &hi) - multilinear_naive(f, &lo)
        })
        .collect()
}

/// `-(1/α) ln Σ e^{-α g_i}`, shifted by the minimum so large `α` does not underflow.
pub fn soft_min_naive(values: &[f64], alpha: f64) -> f64 {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    lo - (values
        .iter()
        .map(|g| (-alpha * (g - lo)).exp())
        .sum::<f64>())
    .ln()
        / alpha
}

/// Coverage scaled so that `f(V) <= 1`.
pub fn normalized_coverage<R: Rng>(n: usize, items: usize, density: f64, rng: &mut R) -> Oracle {
    let c = Coverage::random(n, items, density, rng);
    let total = c.total_weight().max(1e-9);
    Oracle::new(Scaled::new(Oracle::new(c), 1.0 / total).unwrap())
}

pub fn random_coverage<R: Rng>(n: usize, rng: &mut R) -> Oracle {
    Oracle::new(Coverage::random(n, 2 * n, 0.3, rng))
}

pub fn random_facility_location<R: Rng>(n: usize, users: usize, rng: &mut R) -> Oracle {
    let ratings = (0..users)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(0.4) {
                        rng.gen_range(1..=5) as f64
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    Oracle::new(FacilityLocation::new(ratings, 5.0).unwrap())
}

pub fn random_objective<R: Rng>(n: usize, rng: &mut R) -> Oracle {
    if rng.gen_bool(0.5) {
        random_coverage(n, rng)
    } else {
        random_facility_location(n, 6, rng)
    }
}

pub fn random_partition<R: Rng>(n: usize, rng: &mut R) -> PartitionMatroid {
    let q = rng.gen_range(1..=n.min(3));
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut parts = vec![Vec::new(); q];
    for (i, e) in order.into_iter().enumerate() {
        parts[if i < q { i } else { rng.gen_range(0..q) }].push(e);
    }
    let budgets = parts
        .iter()
        .map(|p| rng.gen_range(1..=p.len().min(2)))
        .collect();
    PartitionMatroid::new(parts, budgets).unwrap()
}

/// Partition, uniform or random binary matroid.
pub fn random_matroid<R: Rng>(n: usize, rng: &mut R) -> Arc<dyn Matroid> {
    match rng.gen_range(0..3) {
        0 => Arc::new(random_partition(n, rng)),
        1 => Arc::new(UniformMatroid::new(n, rng.gen_range(1..=3))),
        _ => Arc::new(ExplicitMatroid::random_binary(n, rng.gen_range(2..=4), rng)),
    }
}

pub fn union_of(layers: &[ElementSet]) -> ElementSet {
    let mut u = ElementSet::new();
    for l in layers {
        u.union_with(l);
    }
    u
}
