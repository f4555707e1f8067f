mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robustsub::matroid::{rank, KnapsackConstraint, Matroid, UniformMatroid};
use robustsub::offline::{
    brute_force_opt, distributionally_robust_solve, ell_matroid, extended_bang_per_buck,
    extended_greedy, extended_greedy_intersection, robust_intersection_solve,
    robust_knapsack_solve, robust_matroid_solve,
};
use robustsub::{Constraint, ElementSet, GammaSearch, Oracle};

fn instance(seed: u64, n: usize, k: usize) -> (Vec<Oracle>, Arc<dyn Matroid>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let objs = (0..k).map(|_| random_objective(n, &mut rng)).collect();
    (objs, random_matroid(n, &mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn greedy_layers_are_bases(seed in any::<u64>(), n in 3usize..9, ell in 1usize..5) {
        let (objs, m) = instance(seed, n, 1);
        let sol = extended_greedy(&objs[0], m.as_ref(), ell).unwrap();
        let r = rank(m.as_ref(), &ElementSet::full(n));
        prop_assert_eq!(sol.layers.len(), ell);
        for l in &sol.layers {
            prop_assert!(m.is_independent(l));
            prop_assert_eq!(l.len(), r);
        }
        prop_assert_eq!(&sol.union, &union_of(&sol.layers));
        prop_assert!(sol.union.len() <= ell * r);
    }

    #[test]
    fn more_layers_never_hurt(seed in any::<u64>(), n in 3usize..9) {
        let (objs, m) = instance(seed, n, 1);
        let mut last = f64::NEG_INFINITY;
        for ell in 1..5 {
            let v = extended_greedy(&objs[0], m.as_ref(), ell).unwrap().per_objective_values[0];
            prop_assert!(v >= last - 1e-12);
            last = v;
        }
    }

    #[test]
    fn robust_matches_brute_force_ratio(seed in any::<u64>(), n in 3usize..8, k in 1usize..4) {
        let (objs, m) = instance(seed, n, k);
        let eps = 0.2;
        let (opt, _) = brute_max_min(&objs, n, |s| m.is_independent(s));
        for search in [GammaSearch::Descending, GammaSearch::Binary] {
            let sol = robust_matroid_solve(&objs, m.as_ref(), eps, search).unwrap();
            prop_assert!(sol.min_value() >= (1.0 - eps) * opt - 1e-9, "{} < {}", sol.min_value(), opt);
            prop_assert_eq!(sol.layers.len(), ell_matroid(k, eps));
            prop_assert!(sol.layers.iter().all(|l| m.is_independent(l)));
        }
    }

    #[test]
    fn knapsack_layers_respect_capacity(seed in any::<u64>(), n in 3usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_objective(n, &mut rng);
        let costs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.9)).collect();
        let ks = KnapsackConstraint::new(costs.clone(), 1.0).unwrap();
        let ell = rng.gen_range(1..4);
        let sol = extended_bang_per_buck(&f, &ks, ell).unwrap();
        let cost = |s: &ElementSet| s.iter().map(|e| costs[e]).sum::<f64>();
        for l in &sol.layers {
            prop_assert!(cost(l) <= 2.0 + 1e-12);
        }
        prop_assert!(cost(&sol.union) <= 2.0 * ell as f64 + 1e-9);
        prop_assert_eq!(sol.layer_costs.as_ref().map(Vec::len), Some(ell));
    }

    #[test]
    fn intersection_layers_independent_in_all(seed in any::<u64>(), n in 3usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_objective(n, &mut rng);
        let ms = vec![random_matroid(n, &mut rng), random_matroid(n, &mut rng)];
        let sol = extended_greedy_intersection(&f, &ms, 3).unwrap();
        for l in &sol.layers {
            prop_assert!(ms.iter().all(|m| m.is_independent(l)));
        }
    }
}

#[test]
fn knapsack_robust_against_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..30 {
        let n = rng.gen_range(3..8);
        let objs: Vec<Oracle> = (0..2).map(|_| random_objective(n, &mut rng)).collect();
        let costs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..0.7)).collect();
        let ks = KnapsackConstraint::new(costs.clone(), 1.0).unwrap();
        let eps = 0.2;
        let (opt, _) = brute_max_min(&objs, n, |s| s.iter().map(|e| costs[e]).sum::<f64>() <= 1.0);
        let sol = robust_knapsack_solve(&objs, &ks, eps, GammaSearch::Descending).unwrap();
        assert!(sol.min_value() >= (1.0 - eps) * opt - 1e-9);
        assert!(sol.union_cost.unwrap() <= 2.0 * sol.ell as f64 + 1e-9);
    }
}

#[test]
fn intersection_robust_against_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..30 {
        let n = rng.gen_range(3..8);
        let objs: Vec<Oracle> = (0..2).map(|_| random_objective(n, &mut rng)).collect();
        let ms = vec![random_matroid(n, &mut rng), random_matroid(n, &mut rng)];
        let eps = 0.2;
        let (opt, _) = brute_max_min(&objs, n, |s| ms.iter().all(|m| m.is_independent(s)));
        let sol = robust_intersection_solve(&objs, &ms, eps, GammaSearch::Binary).unwrap();
        assert!(sol.min_value() >= (1.0 - eps) * opt - 1e-9);
    }
}

#[test]
fn distributionally_robust_against_vertex_mixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..20 {
        let n = rng.gen_range(3..8);
        let objs: Vec<Oracle> = (0..3).map(|_| random_objective(n, &mut rng)).collect();
        let m: Arc<dyn Matroid> = Arc::new(UniformMatroid::new(n, 2));
        let vertices: Vec<Vec<f64>> = (0..2)
            .map(|_| {
                let w: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..1.0)).collect();
                let s: f64 = w.iter().sum();
                w.into_iter().map(|x| x / s).collect()
            })
            .collect();
        let mixed_min = |s: &ElementSet| {
            vertices
                .iter()
                .map(|q| q.iter().zip(&objs).map(|(w, f)| w * f.eval(s)).sum::<f64>())
                .fold(f64::INFINITY, f64::min)
        };
        let opt = (0..1u64 << n)
            .map(mask_set)
            .filter(|s| s.len() <= 2)
            .map(|s| mixed_min(&s))
            .fold(0.0, f64::max);
        let eps = 0.2;
        let sol = distributionally_robust_solve(
            &objs,
            &vertices,
            m.as_ref(),
            eps,
            GammaSearch::Descending,
        )
        .unwrap();
        assert!(mixed_min(&sol.union) >= (1.0 - eps) * opt - 1e-9);
        let brute = brute_force_opt(
            &objs,
            &Constraint::Polytope {
                matroid: m.clone(),
                vertices: vertices.clone(),
            },
        )
        .unwrap();
        assert!((brute.value - opt).abs() < 1e-12);
    }
}

#[test]
fn brute_force_agrees_with_mask_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..40 {
        let n = rng.gen_range(2..9);
        let objs: Vec<Oracle> = (0..rng.gen_range(1..4))
            .map(|_| random_objective(n, &mut rng))
            .collect();
        let m = random_matroid(n, &mut rng);
        let (opt, _) = brute_max_min(&objs, n, |s| m.is_independent(s));
        let got = brute_force_opt(&objs, &Constraint::Matroid(m)).unwrap();
        assert!((got.value - opt).abs() < 1e-12);
    }
}
