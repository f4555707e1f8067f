//! JSON instance files. Paths inside a file are resolved against a working
//! directory supplied by the caller.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{
    read_ratings_csv, Coverage, FacilityLocation, FnFunction, GroundSet, Modular, Oracle,
    PerturbedFamilySpec, Scaled,
};
use crate::instance::{Constraint, RobustInstance};
use crate::matroid::{
    ExplicitMatroid, KnapsackConstraint, Matroid, PartitionMatroid, UniformMatroid,
};
use crate::online::OnlineSchedule;
use crate::set::ElementSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ObjectiveSpec {
    Modular {
        weights: Vec<f64>,
    },
    /// Element `e` covers the items `covers[e]`; item weights default to 1.
    Coverage {
        covers: Vec<Vec<usize>>,
        #[serde(default)]
        weights: Option<Vec<f64>>,
        #[serde(default)]
        items: Option<usize>,
    },
    /// Ratings inline or from a CSV (header of element labels, one row per user).
    FacilityLocation {
        #[serde(default)]
        ratings: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        ratings_csv: Option<PathBuf>,
        #[serde(default = "default_r_max")]
        r_max: f64,
    },
    /// All `2^n` values, indexed by bitmask.
    Table {
        values: Vec<f64>,
    },
    Scaled {
        inner: Box<ObjectiveSpec>,
        factor: f64,
    },
    /// Expands to the `k` members of a perturbed family of `base`.
    Perturbed {
        base: Box<ObjectiveSpec>,
        family: PerturbedFamilySpec,
    },
}

fn default_r_max() -> f64 {
    5.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ConstraintSpec {
    Uniform {
        budget: usize,
    },
    Partition {
        parts: Vec<Vec<usize>>,
        budgets: Vec<usize>,
    },
    /// Every independent set, or only the maximal ones when `maximal` is set.
    Explicit {
        sets: Vec<Vec<usize>>,
        #[serde(default)]
        maximal: bool,
    },
    Knapsack {
        costs: Vec<f64>,
        #[serde(default = "default_capacity")]
        capacity: f64,
    },
    Intersection {
        matroids: Vec<ConstraintSpec>,
    },
    /// Mixtures `Σ q_i f_i` over the listed vertices `q`, under a matroid.
    Polytope {
        matroid: Box<ConstraintSpec>,
        vertices: Vec<Vec<f64>>,
    },
}

fn default_capacity() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AdversarySpec {
    Stationary {
        horizon: usize,
    },
    Drifting {
        horizon: usize,
        period: usize,
        #[serde(default)]
        seed: u64,
    },
    /// Alternates between the instance objectives and `objectives` at each switch time.
    Switching {
        horizon: usize,
        switch_times: Vec<usize>,
        objectives: Vec<ObjectiveSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    pub objectives: Vec<ObjectiveSpec>,
    pub constraint: ConstraintSpec,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub adversary: Option<AdversarySpec>,
}

/// An instance file after every objective and constraint has been built.
#[derive(Debug)]
pub struct LoadedInstance {
    pub ground: GroundSet,
    pub objectives: Vec<Oracle>,
    pub constraint: Constraint,
    pub epsilon: Option<f64>,
    pub spec: InstanceSpec,
    workdir: PathBuf,
}

impl LoadedInstance {
    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn robust(&self, epsilon: f64) -> Result<RobustInstance> {
        RobustInstance::new(
            self.ground.clone(),
            self.objectives.clone(),
            self.constraint.clone(),
            epsilon,
        )
    }

    /// The matroid of a matroid or polytope constraint.
    pub fn matroid(&self) -> Result<Arc<dyn Matroid>> {
        match &self.constraint {
            Constraint::Matroid(m) | Constraint::Polytope { matroid: m, .. } => Ok(m.clone()),
            _ => Err(Error::param("this command needs a matroid constraint")),
        }
    }

    /// Online schedule described by the file's `adversary` block.
    pub fn schedule(&self) -> Result<OnlineSchedule> {
        let adv = self
            .spec
            .adversary
            .as_ref()
            .ok_or_else(|| Error::param("instance has no adversary block"))?;
        match adv {
            AdversarySpec::Stationary { horizon } => {
                OnlineSchedule::stationary(&self.objectives, *horizon)
            }
            AdversarySpec::Drifting {
                horizon,
                period,
                seed,
            } => OnlineSchedule::drifting(&self.objectives, *horizon, *period, *seed),
            AdversarySpec::Switching {
                horizon,
                switch_times,
                objectives,
            } => {
                let other = build_objectives(objectives, &self.workdir)?;
                OnlineSchedule::switching(&self.objectives, &other, *horizon, switch_times)
            }
        }
    }
}

impl InstanceSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path, workdir: &Path) -> Result<LoadedInstance> {
        let text = std::fs::read_to_string(workdir.join(path))?;
        Self::from_json(&text)?.build(workdir)
    }

    pub fn build(self, workdir: &Path) -> Result<LoadedInstance> {
        let objectives = build_objectives(&self.objectives, workdir)?;
        let n = match (self.n, &self.labels, objectives.first()) {
            (Some(n), _, _) => n,
            (None, Some(l), _) => l.len(),
            (None, None, Some(f)) => f.ground_size(),
            (None, None, None) => return Err(Error::param("instance has no objectives and no n")),
        };
        let ground = match &self.labels {
            Some(l) => {
                if l.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: l.len(),
                    });
                }
                GroundSet::with_labels(l.clone())?
            }
            None => GroundSet::new(n)?,
        };
        let constraint = build_constraint(&self.constraint, n)?;
        Ok(LoadedInstance {
            ground,
            objectives,
            constraint,
            epsilon: self.epsilon,
            spec: self,
            workdir: workdir.to_path_buf(),
        })
    }
}

pub fn build_objectives(specs: &[ObjectiveSpec], workdir: &Path) -> Result<Vec<Oracle>> {
    let mut out = Vec::new();
    for s in specs {
        match s {
            ObjectiveSpec::Perturbed { base, family } => {
                let base = build_objective(base, workdir)?;
                out.extend(family.build(base)?.members());
            }
            other => out.push(build_objective(other, workdir)?),
        }
    }
    Ok(out)
}

fn build_objective(spec: &ObjectiveSpec, workdir: &Path) -> Result<Oracle> {
    Ok(match spec {
        ObjectiveSpec::Modular { weights } => Oracle::new(Modular::new(weights.clone())?),
        ObjectiveSpec::Coverage {
            covers,
            weights,
            items,
        } => {
            let items =
                items.unwrap_or_else(|| covers.iter().flatten().map(|&i| i + 1).max().unwrap_or(0));
            let weights = weights.clone().unwrap_or_else(|| vec![1.0; items]);
            Oracle::new(Coverage::new(covers.clone(), weights)?)
        }
        ObjectiveSpec::FacilityLocation {
            ratings,
            ratings_csv,
            r_max,
        } => {
            let ratings = match (ratings, ratings_csv) {
                (Some(r), None) => r.clone(),
                (None, Some(path)) => {
                    read_ratings_csv(std::fs::File::open(workdir.join(path))?)?.ratings
                }
                _ => {
                    return Err(Error::param(
                        "facility location needs exactly one of ratings, ratings_csv",
                    ))
                }
            };
            Oracle::new(FacilityLocation::new(ratings, *r_max)?)
        }
        ObjectiveSpec::Table { values } => {
            let len = values.len();
            if len == 0 || !len.is_power_of_two() {
                return Err(Error::param(format!(
                    "table of {len} values is not 2^n long"
                )));
            }
            let n = len.trailing_zeros() as usize;
            let values = values.clone();
            Oracle::new(FnFunction::new(n, move |s: &ElementSet| {
                values[s.to_mask().expect("table sets fit in a mask") as usize]
            }))
        }
        ObjectiveSpec::Scaled { inner, factor } => {
            Oracle::new(Scaled::new(build_objective(inner, workdir)?, *factor)?)
        }
        ObjectiveSpec::Perturbed { .. } => {
            return Err(Error::param("perturbed families cannot be nested"));
        }
    })
}

pub fn build_matroid(spec: &ConstraintSpec, n: usize) -> Result<Arc<dyn Matroid>> {
    Ok(match spec {
        ConstraintSpec::Uniform { budget } => Arc::new(UniformMatroid::new(n, *budget)),
        ConstraintSpec::Partition { parts, budgets } => {
            Arc::new(PartitionMatroid::new(parts.clone(), budgets.clone())?)
        }
        ConstraintSpec::Explicit { sets, maximal } => {
            if *maximal {
                Arc::new(ExplicitMatroid::from_maximal(n, sets)?)
            } else {
                Arc::new(ExplicitMatroid::new(n, sets)?)
            }
        }
        _ => {
            return Err(Error::param(
                "expected a matroid (uniform, partition or explicit)",
            ))
        }
    })
}

pub fn build_constraint(spec: &ConstraintSpec, n: usize) -> Result<Constraint> {
    let c = match spec {
        ConstraintSpec::Knapsack { costs, capacity } => {
            Constraint::Knapsack(KnapsackConstraint::new(costs.clone(), *capacity)?)
        }
        ConstraintSpec::Intersection { matroids } => Constraint::Intersection(
            matroids
                .iter()
                .map(|m| build_matroid(m, n))
                .collect::<Result<Vec<_>>>()?,
        ),
        ConstraintSpec::Polytope { matroid, vertices } => Constraint::Polytope {
            matroid: build_matroid(matroid, n)?,
            vertices: vertices.clone(),
        },
        other => Constraint::Matroid(build_matroid(other, n)?),
    };
    if c.ground_size() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: c.ground_size(),
        });
    }
    Ok(c)
}
