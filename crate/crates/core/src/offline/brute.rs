use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::Oracle;
use crate::instance::Constraint;
use crate::set::ElementSet;

/// Largest ground set [`brute_force_opt`] enumerates.
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForceResult {
    /// `max_{S feasible} min_i f_i(S)`.
    pub value: f64,
    /// Lexicographically smallest maximizer.
    pub set: ElementSet,
    /// Number of feasible sets visited.
    pub visited: u64,
}

/// Exact robust optimum by depth-first enumeration of feasible sets. Every
/// supported constraint is downward closed, so infeasible branches are pruned.
/// For [`Constraint::Polytope`] the objective is the minimum over the vertex
/// mixtures `sum_i q_i f_i`.
pub fn brute_force_opt(objectives: &[Oracle], constraint: &Constraint) -> Result<BruteForceResult> {
    if objectives.is_empty() {
        return Err(Error::param("brute force needs at least one objective"));
    }
    let n = constraint.ground_size();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeLimit {
            what: "brute-force optimum",
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let vertices = match constraint {
        Constraint::Polytope { vertices, .. } => {
            if vertices.is_empty() {
                return Err(Error::param(
                    "polytope constraint needs at least one vertex",
                ));
            }
            for q in vertices {
                if q.len() != objectives.len() {
                    return Err(Error::DimensionMismatch {
                        expected: objectives.len(),
                        got: q.len(),
                    });
                }
            }
            Some(vertices.as_slice())
        }
        _ => None,
    };
    let score = |s: &ElementSet| -> f64 {
        let values: Vec<f64> = objectives.iter().map(|f| f.eval(s)).collect();
        match vertices {
            None => values.iter().copied().fold(f64::INFINITY, f64::min),
            Some(vs) => vs
                .iter()
                .map(|q| q.iter().zip(&values).map(|(a, b)| a * b).sum::<f64>())
                .fold(f64::INFINITY, f64::min),
        }
    };

    let mut best = BruteForceResult {
        value: score(&ElementSet::new()),
        set: ElementSet::new(),
        visited: 1,
    };
    // Visiting order is lexicographic on sorted index sequences, so keeping the
    // first strict improvement yields the lexicographically smallest maximizer.
    let mut stack: Vec<(ElementSet, usize)> = vec![(ElementSet::new(), 0)];
    while let Some((set, next)) = stack.pop() {
        for e in (next..n).rev() {
            let child = set.with(e);
            if constraint.is_feasible(&child) {
                stack.push((child, e + 1));
            }
        }
        if !set.is_empty() {
            best.visited += 1;
            let v = score(&set);
            if v > best.value || (v == best.value && set.lex_cmp(&best.set).is_lt()) {
                best.value = v;
                best.set = set;
            }
        }
    }
    Ok(best)
}
