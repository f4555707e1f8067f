//! Value oracles for monotone submodular set functions.
//!
//! Every function is reached through an [`Oracle`], a cheap cloneable handle that
//! meters evaluations with an atomic counter. Clones share the counter. Wrappers
//! such as [`Truncated`] hold inner oracles, so one evaluation of a wrapper also
//! shows up on the counters of the oracles it reads.

mod combinators;
mod families;
mod io;
mod verify;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::ElementSet;

pub use combinators::{build_robust_average, mix, RobustAverage, Scaled, Truncated};
pub use families::{
    Coverage, FacilityLocation, FnFunction, Modular, PerturbedFamily, PerturbedMember,
};
pub use io::{read_ratings_csv, PerturbedFamilySpec, RatingsTable};
pub use verify::{
    check_submodular_monotone, MonotonicityViolation, PropertyReport, SubmodularityViolation,
    EXHAUSTIVE_CHECK_LIMIT,
};

/// A set function on `{0, .., n-1}`; implementations must be deterministic.
pub trait SetFunction: Send + Sync {
    fn ground_size(&self) -> usize;

    fn value(&self, set: &ElementSet) -> f64;
}

/// Metered handle to a set function.
#[derive(Clone)]
pub struct Oracle {
    inner: Arc<dyn SetFunction>,
    calls: Arc<AtomicU64>,
}

impl Oracle {
    pub fn new<F: SetFunction + 'static>(f: F) -> Self {
        Self {
            inner: Arc::new(f),
            calls: Arc::new(AtomicU64::new(0)),
        }
    }

    pub fn eval(&self, set: &ElementSet) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.value(set)
    }

    pub fn call_count(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    /// True when both handles share the same underlying function.
    pub fn same_as(&self, other: &Oracle) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oracle")
            .field("n", &self.ground_size())
            .field("calls", &self.call_count())
            .finish()
    }
}

/// Total evaluations recorded across a collection of oracles.
pub fn total_calls(oracles: &[Oracle]) -> u64 {
    oracles.iter().map(Oracle::call_count).sum()
}

/// The ground set `V = {0, .., n-1}` with optional display labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundSet {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("ground set must be non-empty"));
        }
        Ok(Self { n, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut g = Self::new(labels.len())?;
        g.labels = Some(labels);
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, e: usize) -> String {
        match &self.labels {
            Some(l) => l[e].clone(),
            None => e.to_string(),
        }
    }

    pub fn check_element(&self, e: usize) -> Result<()> {
        if e < self.n {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                element: e,
                n: self.n,
            })
        }
    }
}

/// `f(A + e) - f(A)`. Pass `f(A)` as `cached` to save one evaluation.
pub fn marginal(f: &Oracle, a: &ElementSet, e: usize, cached: Option<f64>) -> Result<f64> {
    let n = f.ground_size();
    if e >= n {
        return Err(Error::ElementOutOfRange { element: e, n });
    }
    let base = match cached {
        Some(v) => v,
        None => f.eval(a),
    };
    Ok(f.eval(&a.with(e)) - base)
}
