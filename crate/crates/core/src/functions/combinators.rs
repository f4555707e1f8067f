use super::{Oracle, SetFunction};
use crate::error::{Error, Result};
use crate::set::ElementSet;

/// `min{inner(S), gamma}`.
pub struct Truncated {
    inner: Oracle,
    gamma: f64,
}

impl Truncated {
    pub fn new(inner: Oracle, gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::param(format!(
                "truncation level must be positive, got {gamma}"
            )));
        }
        Ok(Self { inner, gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl SetFunction for Truncated {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        self.inner.eval(set).min(self.gamma)
    }
}

/// `g(S) = (1/k) sum_i min{f_i(S), gamma}`.
pub struct RobustAverage {
    members: Vec<Oracle>,
    gamma: f64,
}

impl SetFunction for RobustAverage {
    fn ground_size(&self) -> usize {
        self.members[0].ground_size()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        let total: f64 = self
            .members
            .iter()
            .map(|f| f.eval(set).min(self.gamma))
            .sum();
        total / self.members.len() as f64
    }
}

/// Average of the objectives truncated at `gamma`. `g <= gamma` everywhere and
/// `g(S) = gamma` exactly when every `f_i(S) >= gamma`.
pub fn build_robust_average(objectives: &[Oracle], gamma: f64) -> Result<Oracle> {
    check_members(objectives)?;
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::param(format!("gamma must be positive, got {gamma}")));
    }
    Ok(Oracle::new(RobustAverage {
        members: objectives.to_vec(),
        gamma,
    }))
}

struct Mixture {
    terms: Vec<(f64, Oracle)>,
    n: usize,
}

impl SetFunction for Mixture {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, set: &ElementSet) -> f64 {
        self.terms.iter().map(|(q, f)| q * f.eval(set)).sum()
    }
}

/// Convex combination `f_q = q_1 f_1 + .. + q_k f_k`.
pub fn mix(q: &[f64], objectives: &[Oracle]) -> Result<Oracle> {
    check_members(objectives)?;
    if q.len() != objectives.len() {
        return Err(Error::DimensionMismatch {
            expected: objectives.len(),
            got: q.len(),
        });
    }
    if let Some(w) = q.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::param(format!("mixture weight {w} is negative")));
    }
    let sum: f64 = q.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::param(format!("mixture weights sum to {sum}, not 1")));
    }
    let terms = q
        .iter()
        .zip(objectives)
        .filter(|(w, _)| **w > 0.0)
        .map(|(w, f)| (*w, f.clone()))
        .collect();
    Ok(Oracle::new(Mixture {
        terms,
        n: objectives[0].ground_size(),
    }))
}

/// `factor * inner(S)` for a positive factor; keeps monotone submodularity.
pub struct Scaled {
    inner: Oracle,
    factor: f64,
}

impl Scaled {
    pub fn new(inner: Oracle, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::param(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        Ok(Self { inner, factor })
    }
}

impl SetFunction for Scaled {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        self.factor * self.inner.eval(set)
    }
}

fn check_members(objectives: &[Oracle]) -> Result<()> {
    let first = objectives
        .first()
        .ok_or_else(|| Error::param("need at least one objective"))?;
    let n = first.ground_size();
    match objectives.iter().find(|f| f.ground_size() != n) {
        Some(f) => Err(Error::DimensionMismatch {
            expected: n,
            got: f.ground_size(),
        }),
        None => Ok(()),
    }
}
