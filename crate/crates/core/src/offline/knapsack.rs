use std::time::Instant;

use super::greedy::{check_ground, LazyQueue};
use super::BiCriteriaSolution;
use crate::error::{Error, Result};
use crate::functions::Oracle;
use crate::matroid::KnapsackConstraint;
use crate::set::ElementSet;

pub(crate) fn bang_per_buck_layers(
    g: &Oracle,
    knapsack: &KnapsackConstraint,
    ell: usize,
) -> Result<Vec<ElementSet>> {
    if ell == 0 {
        return Err(Error::param("bang-per-buck needs ell >= 1"));
    }
    check_ground(g, knapsack.ground_size())?;
    let n = knapsack.ground_size();
    let relaxed = 2.0 * knapsack.capacity();
    let selectable: Vec<usize> = (0..n)
        .filter(|&e| knapsack.cost_of(e) <= knapsack.capacity())
        .collect();
    let mut bounds = vec![f64::INFINITY; n];
    let mut grown = vec![0.0; n];
    let mut current = ElementSet::new();
    let mut value = g.eval(&current);
    let mut layers = Vec::with_capacity(ell);
    for _ in 0..ell {
        // Every round restarts from the full pool; a scanned element leaves the
        // pool whether or not it fit.
        let mut queue = LazyQueue::new(selectable.iter().map(|&e| (e, bounds[e])));
        let mut layer = ElementSet::new();
        let mut cost = 0.0;
        loop {
            let picked = queue.pop_best(
                |_| true,
                |e| {
                    grown[e] = g.eval(&current.with(e));
                    bounds[e] = (grown[e] - value) / knapsack.cost_of(e);
                    bounds[e]
                },
            );
            let Some((e, _)) = picked else { break };
            let c = knapsack.cost_of(e);
            if cost + c <= relaxed + 1e-12 {
                cost += c;
                layer.insert(e);
                if !current.contains(e) {
                    current.insert(e);
                    value = grown[e];
                    queue.advance();
                }
            }
        }
        layers.push(layer);
    }
    Ok(layers)
}

/// `ℓ` rounds of cost-benefit greedy. Each round scans elements by decreasing
/// marginal-per-cost against everything chosen so far, keeping an element when
/// the round's cost stays within twice the capacity. Elements costing more than
/// the capacity are never chosen. For monotone submodular `g`,
/// `g(∪ S_τ) >= (1 - e^-ℓ) max_{S feasible} g(S)`.
pub fn extended_bang_per_buck(
    g: &Oracle,
    knapsack: &KnapsackConstraint,
    ell: usize,
) -> Result<BiCriteriaSolution> {
    let start = Instant::now();
    let before = g.call_count();
    let layers = bang_per_buck_layers(g, knapsack, ell)?;
    let mut sol =
        BiCriteriaSolution::assemble(layers, std::slice::from_ref(g), None, ell, before, start);
    attach_costs(&mut sol, knapsack);
    Ok(sol)
}

pub(crate) fn attach_costs(sol: &mut BiCriteriaSolution, knapsack: &KnapsackConstraint) {
    sol.layer_costs = Some(sol.layers.iter().map(|l| knapsack.cost(l)).collect());
    sol.union_cost = Some(knapsack.cost(&sol.union));
}
