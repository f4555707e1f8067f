use std::sync::Arc;
use std::time::Instant;

use super::gamma::{gamma_candidates, GammaSearch};
use super::greedy::{check_ground, layered_greedy};
use super::knapsack::{attach_costs, bang_per_buck_layers};
use super::{ell_intersection, ell_knapsack, ell_matroid, BiCriteriaSolution};
use crate::error::{Error, Result};
use crate::functions::{build_robust_average, mix, total_calls, Oracle};
use crate::instance::{check_epsilon, Constraint, RobustInstance};
use crate::matroid::{KnapsackConstraint, Matroid};
use crate::set::ElementSet;

/// Runs a layered solver on `g = (1/k) sum_i min{f_i, γ}` for each candidate `γ`
/// and accepts the first union with `min_i f_i >= (1 - ε/2) γ`.
///
/// Candidates above `min_i f_i(V) / (1 - ε/2)` can never be certified and are
/// skipped. If nothing is certified (the optimum is zero), the solver runs on the
/// plain average of the objectives and reports `γ = 0`.
fn robust_search(
    objectives: &[Oracle],
    epsilon: f64,
    ell: usize,
    search: GammaSearch,
    layers_for: &dyn Fn(&Oracle) -> Result<Vec<ElementSet>>,
) -> Result<BiCriteriaSolution> {
    if objectives.is_empty() {
        return Err(Error::param("robust solve needs at least one objective"));
    }
    check_epsilon(epsilon)?;
    let start = Instant::now();
    let before = total_calls(objectives);
    let n = objectives[0].ground_size();
    for f in objectives {
        check_ground(f, n)?;
    }
    let threshold = 1.0 - epsilon / 2.0;
    let full = ElementSet::full(n);
    let cap = objectives
        .iter()
        .map(|f| f.eval(&full))
        .fold(f64::INFINITY, f64::min)
        / threshold;
    let mut candidates = gamma_candidates(objectives, epsilon)?;
    candidates.prune_above(cap * (1.0 + 1e-12));

    let found = candidates.search(search, |gamma| {
        let g = build_robust_average(objectives, gamma)?;
        let layers = layers_for(&g)?;
        let mut union = ElementSet::new();
        for l in &layers {
            union.union_with(l);
        }
        let certified = objectives
            .iter()
            .all(|f| f.eval(&union) >= threshold * gamma * (1.0 - 1e-12));
        Ok(certified.then_some(layers))
    })?;
    let (gamma, layers) = match found {
        Some(hit) => hit,
        None => {
            let k = objectives.len();
            let avg = mix(&vec![1.0 / k as f64; k], objectives)?;
            (0.0, layers_for(&avg)?)
        }
    };
    Ok(BiCriteriaSolution::assemble(
        layers,
        objectives,
        Some(gamma),
        ell,
        before,
        start,
    ))
}

/// Robust reduction over a matroid: extended greedy with `ℓ = ⌈log₂(2k/ε)⌉` on
/// the truncated average. Guarantees `min_i f_i(union) >= (1 - ε) OPT`.
pub fn robust_matroid_solve(
    objectives: &[Oracle],
    m: &dyn Matroid,
    epsilon: f64,
    search: GammaSearch,
) -> Result<BiCriteriaSolution> {
    check_epsilon(epsilon)?;
    let ell = ell_matroid(objectives.len(), epsilon);
    robust_search(objectives, epsilon, ell, search, &|g| {
        check_ground(g, m.ground_size())?;
        layered_greedy(g, ell, &|s| m.is_independent(s))
    })
}

/// Robust reduction over a knapsack with bang-per-buck and `ℓ = ⌈ln(2k/ε)⌉`.
pub fn robust_knapsack_solve(
    objectives: &[Oracle],
    knapsack: &KnapsackConstraint,
    epsilon: f64,
    search: GammaSearch,
) -> Result<BiCriteriaSolution> {
    check_epsilon(epsilon)?;
    let ell = ell_knapsack(objectives.len(), epsilon);
    let mut sol = robust_search(objectives, epsilon, ell, search, &|g| {
        bang_per_buck_layers(g, knapsack, ell)
    })?;
    attach_costs(&mut sol, knapsack);
    Ok(sol)
}

/// Robust reduction over an intersection of `r` matroids with
/// `ℓ = ⌈log(2k/ε) / log((r+1)/r)⌉`.
pub fn robust_intersection_solve(
    objectives: &[Oracle],
    matroids: &[Arc<dyn Matroid>],
    epsilon: f64,
    search: GammaSearch,
) -> Result<BiCriteriaSolution> {
    if matroids.is_empty() {
        return Err(Error::param(
            "matroid intersection needs at least one matroid",
        ));
    }
    check_epsilon(epsilon)?;
    let ell = ell_intersection(objectives.len(), epsilon, matroids.len());
    robust_search(objectives, epsilon, ell, search, &|g| {
        layered_greedy(g, ell, &|s| matroids.iter().all(|m| m.is_independent(s)))
    })
}

/// Max-min over the mixing set `Q = conv(vertices)`: the minimum of the linear
/// function `q ↦ sum_i q_i f_i(S)` is attained at a vertex, so this is the robust
/// problem over the vertex mixtures. Values are reported per vertex.
pub fn distributionally_robust_solve(
    objectives: &[Oracle],
    vertices: &[Vec<f64>],
    m: &dyn Matroid,
    epsilon: f64,
    search: GammaSearch,
) -> Result<BiCriteriaSolution> {
    if vertices.is_empty() {
        return Err(Error::param(
            "distributionally robust solve needs at least one vertex",
        ));
    }
    let mixed = vertices
        .iter()
        .map(|q| mix(q, objectives))
        .collect::<Result<Vec<_>>>()?;
    let before = total_calls(objectives);
    let mut sol = robust_matroid_solve(&mixed, m, epsilon, search)?;
    sol.oracle_calls = total_calls(objectives) - before;
    Ok(sol)
}

/// Dispatches on the instance's constraint.
pub fn robust_offline_solve(
    instance: &RobustInstance,
    search: GammaSearch,
) -> Result<BiCriteriaSolution> {
    let eps = instance.epsilon;
    match &instance.constraint {
        Constraint::Matroid(m) => {
            robust_matroid_solve(&instance.objectives, m.as_ref(), eps, search)
        }
        Constraint::Knapsack(k) => robust_knapsack_solve(&instance.objectives, k, eps, search),
        Constraint::Intersection(ms) => {
            robust_intersection_solve(&instance.objectives, ms, eps, search)
        }
        Constraint::Polytope { matroid, vertices } => distributionally_robust_solve(
            &instance.objectives,
            vertices,
            matroid.as_ref(),
            eps,
            search,
        ),
    }
}
