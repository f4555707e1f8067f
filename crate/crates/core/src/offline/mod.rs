//! Discrete offline algorithms: extended greedy, the robust reduction with a
//! search over `γ`, bang-per-buck for knapsacks, multi-matroid greedy, the
//! distributionally robust variant and an exhaustive optimum for small inputs.

mod brute;
mod gamma;
mod greedy;
mod knapsack;
mod robust;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use brute::{brute_force_opt, BruteForceResult, BRUTE_FORCE_LIMIT};
pub use gamma::{gamma_candidates, GammaCandidates, GammaSearch};
pub use greedy::{extended_greedy, extended_greedy_intersection};
pub use knapsack::extended_bang_per_buck;
pub use robust::{
    distributionally_robust_solve, robust_intersection_solve, robust_knapsack_solve,
    robust_matroid_solve, robust_offline_solve,
};

use crate::functions::{total_calls, Oracle};
use crate::set::ElementSet;

/// Output of every offline solver: `ℓ` feasible layers and their union.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiCriteriaSolution {
    pub layers: Vec<ElementSet>,
    pub union: ElementSet,
    /// `f_i(union)` for each objective, in input order.
    pub per_objective_values: Vec<f64>,
    /// Certified truncation level, if the solver searched over `γ`.
    pub gamma: Option<f64>,
    pub ell: usize,
    pub oracle_calls: u64,
    pub wall_time_ms: f64,
    /// Knapsack solvers only: cost of each layer.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layer_costs: Option<Vec<f64>>,
    /// Knapsack solvers only: cost of the union.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub union_cost: Option<f64>,
    /// Set when the requested method failed and a fallback produced this solution.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub fallback: bool,
}

impl BiCriteriaSolution {
    pub(crate) fn assemble(
        layers: Vec<ElementSet>,
        objectives: &[Oracle],
        gamma: Option<f64>,
        ell: usize,
        calls_before: u64,
        start: Instant,
    ) -> Self {
        let mut union = ElementSet::new();
        for l in &layers {
            union.union_with(l);
        }
        let per_objective_values = objectives.iter().map(|f| f.eval(&union)).collect();
        Self {
            layers,
            union,
            per_objective_values,
            gamma,
            ell,
            oracle_calls: total_calls(objectives) - calls_before,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
            layer_costs: None,
            union_cost: None,
            fallback: false,
        }
    }

    /// `min_i f_i(union)`.
    pub fn min_value(&self) -> f64 {
        self.per_objective_values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

fn ceil_tol(x: f64) -> usize {
    // Guards against `log` landing a hair above an exact integer.
    (x - 1e-9).ceil().max(1.0) as usize
}

/// `⌈log₂(2k/ε)⌉`: layers for the robust matroid reduction.
pub fn ell_matroid(k: usize, epsilon: f64) -> usize {
    ceil_tol((2.0 * k as f64 / epsilon).log2())
}

/// `⌈ln(2k/ε)⌉`: layers for the robust knapsack reduction.
pub fn ell_knapsack(k: usize, epsilon: f64) -> usize {
    ceil_tol((2.0 * k as f64 / epsilon).ln())
}

/// `⌈log(2k/ε) / log((r+1)/r)⌉`: layers for an intersection of `r` matroids.
pub fn ell_intersection(k: usize, epsilon: f64, r: usize) -> usize {
    let r = r as f64;
    ceil_tol((2.0 * k as f64 / epsilon).ln() / ((r + 1.0) / r).ln())
}

/// `⌈ln(k/ε) + ln(1/c)⌉`: layers for the continuous route with success constant `c`.
pub fn ell_continuous(k: usize, epsilon: f64, c: f64) -> usize {
    ceil_tol((k as f64 / epsilon).ln() + (1.0 / c).ln())
}

/// `⌈ln(1/ε)⌉`: layers played by the online algorithm.
pub fn ell_online(epsilon: f64) -> usize {
    ceil_tol((1.0 / epsilon).ln())
}
