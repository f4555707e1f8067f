//! Robust instances: a ground set, `k` objectives and one constraint.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functions::{GroundSet, Oracle};
use crate::matroid::{KnapsackConstraint, Matroid};
use crate::set::ElementSet;

/// Feasible region of a robust instance. Every variant is downward closed.
#[derive(Clone)]
pub enum Constraint {
    Matroid(Arc<dyn Matroid>),
    Knapsack(KnapsackConstraint),
    /// Sets independent in every listed matroid.
    Intersection(Vec<Arc<dyn Matroid>>),
    /// Distributionally robust: a matroid plus the vertices of the mixing set `Q`.
    Polytope {
        matroid: Arc<dyn Matroid>,
        vertices: Vec<Vec<f64>>,
    },
}

impl std::fmt::Debug for Constraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Constraint::Matroid(m) => write!(f, "Matroid(n={})", m.ground_size()),
            Constraint::Knapsack(k) => write!(f, "{k:?}"),
            Constraint::Intersection(ms) => write!(f, "Intersection(r={})", ms.len()),
            Constraint::Polytope { vertices, .. } => {
                write!(f, "Polytope(vertices={})", vertices.len())
            }
        }
    }
}

impl Constraint {
    pub fn ground_size(&self) -> usize {
        match self {
            Constraint::Matroid(m) | Constraint::Polytope { matroid: m, .. } => m.ground_size(),
            Constraint::Knapsack(k) => k.ground_size(),
            Constraint::Intersection(ms) => ms.first().map_or(0, |m| m.ground_size()),
        }
    }

    /// Membership in the (unrelaxed) feasible family.
    pub fn is_feasible(&self, set: &ElementSet) -> bool {
        match self {
            Constraint::Matroid(m) | Constraint::Polytope { matroid: m, .. } => {
                m.is_independent(set)
            }
            Constraint::Knapsack(k) => k.is_feasible(set),
            Constraint::Intersection(ms) => ms.iter().all(|m| m.is_independent(set)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RobustInstance {
    pub ground: GroundSet,
    pub objectives: Vec<Oracle>,
    pub constraint: Constraint,
    pub epsilon: f64,
}

impl RobustInstance {
    pub fn new(
        ground: GroundSet,
        objectives: Vec<Oracle>,
        constraint: Constraint,
        epsilon: f64,
    ) -> Result<Self> {
        if objectives.is_empty() {
            return Err(Error::param(
                "a robust instance needs at least one objective",
            ));
        }
        check_epsilon(epsilon)?;
        let n = ground.len();
        for f in &objectives {
            if f.ground_size() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: f.ground_size(),
                });
            }
        }
        if constraint.ground_size() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: constraint.ground_size(),
            });
        }
        if let Constraint::Intersection(ms) = &constraint {
            if ms.is_empty() {
                return Err(Error::param(
                    "matroid intersection needs at least one matroid",
                ));
            }
            if let Some(m) = ms.iter().find(|m| m.ground_size() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: m.ground_size(),
                });
            }
        }
        Ok(Self {
            ground,
            objectives,
            constraint,
            epsilon,
        })
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn k(&self) -> usize {
        self.objectives.len()
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )))
    }
}
