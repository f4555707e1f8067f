//! Robust monotone submodular maximization: max-min over several objectives
//! under matroid, knapsack and multi-matroid constraints, offline and online.

pub mod continuous;
pub mod error;
pub mod functions;
pub mod harness;
pub mod instance;
pub mod matroid;
pub mod multilinear;
pub mod offline;
pub mod online;
pub mod rounding;
pub mod set;
pub mod softmin;

pub use continuous::{robust_continuous_solve, ContinuousConfig};
pub use error::{Error, MatroidViolation, Result};
pub use functions::{GroundSet, Oracle, SetFunction};
pub use instance::{Constraint, RobustInstance};
pub use matroid::{Matroid, UnionMatroid};
pub use multilinear::{EstimatorConfig, FractionalPoint};
pub use offline::{robust_offline_solve, BiCriteriaSolution, GammaSearch};
pub use online::{online_softmin_run, OnlineConfig, OnlineSchedule, RegretReport};
pub use set::ElementSet;
