//! Continuous greedy for the robust problem: truncate every objective at `γ`,
//! ascend along directions of the matroid polytope that raise every truncated
//! extension, then round the endpoint in the union matroid.

use std::sync::Arc;
use std::time::Instant;

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{total_calls, Oracle};
use crate::instance::check_epsilon;
use crate::matroid::{Matroid, PartitionMatroid, UnionMatroid};
use crate::multilinear::{EstimatorConfig, Evaluator, FractionalPoint, PointEstimate};
use crate::offline::{
    ell_continuous, gamma_candidates, robust_matroid_solve, BiCriteriaSolution, GammaSearch,
};
use crate::rounding::{decompose, swap_round, ConvexDecomposition};
use crate::set::ElementSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuousConfig {
    /// Step size; must divide `ℓ`.
    pub delta: f64,
    /// Success constant of one rounding draw; sets `ℓ = ⌈ln(k/ε) + ln(1/c)⌉`.
    pub c: f64,
    /// Rounding draws per decision before rejecting.
    pub repeats: usize,
    /// Force exact (`Some(true)`) or sampled (`Some(false)`) extensions; `None`
    /// picks exact tables for small ground sets.
    pub exact: Option<bool>,
    pub estimator: EstimatorConfig,
    pub seed: u64,
}

impl Default for ContinuousConfig {
    fn default() -> Self {
        Self {
            delta: 0.01,
            c: 0.5,
            repeats: 20,
            exact: None,
            estimator: EstimatorConfig::default(),
            seed: 0,
        }
    }
}

impl ContinuousConfig {
    fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::param(format!(
                "step size {} must lie in (0, 1]",
                self.delta
            )));
        }
        if !(self.c > 0.0 && self.c < 1.0) {
            return Err(Error::param(format!(
                "success constant {} must lie in (0, 1)",
                self.c
            )));
        }
        if self.repeats == 0 {
            return Err(Error::param("need at least one rounding repeat"));
        }
        Ok(())
    }

    fn evaluator(&self, objectives: &[Oracle]) -> Result<Evaluator> {
        match self.exact {
            Some(true) => Evaluator::exact(objectives),
            Some(false) => Ok(Evaluator::sampled(objectives, self.estimator)),
            None => Evaluator::auto(objectives, self.estimator),
        }
    }
}

/// Record of one ascent. `points[s]` is `y` at time `grid[s] = s·δ`; step `s`
/// moved along `directions[s]`, whose decomposition into independent sets of the
/// base matroid certifies it lies in `P(M)` (and hence `y(τ) ∈ τ·P(M)`).
#[derive(Debug, Clone, Serialize)]
pub struct AscentTrace {
    pub delta: f64,
    pub ell: usize,
    pub gamma: f64,
    pub exact: bool,
    pub grid: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub directions: Vec<Vec<f64>>,
    pub direction_atoms: Vec<ConvexDecomposition>,
    /// `F_i^γ(y(τ))` per grid time and objective.
    pub f_values: Vec<Vec<f64>>,
    /// LP margin `t` of each step (how far condition (a) held with room to spare).
    pub margins: Vec<f64>,
}

/// Plot-ready view of a trace.
#[derive(Debug, Clone, Serialize)]
pub struct TraceCurve {
    pub tau: Vec<f64>,
    pub f_values: Vec<Vec<f64>>,
    /// `(1 - e^{-τ})·γ`.
    pub reference: Vec<f64>,
}

impl AscentTrace {
    pub fn endpoint(&self) -> FractionalPoint {
        FractionalPoint::new(self.points.last().expect("trace has a start point").clone())
            .expect("ascent stays in the unit cube")
    }

    pub fn curve(&self) -> TraceCurve {
        TraceCurve {
            tau: self.grid.clone(),
            f_values: self.f_values.clone(),
            reference: self
                .grid
                .iter()
                .map(|t| (1.0 - (-t).exp()) * self.gamma)
                .collect(),
        }
    }

    /// Grid times where some `F_i^γ(y(τ)) < (1 - e^{-τ})γ - tol(τ)`.
    pub fn claim_violations(&self, tol: impl Fn(f64) -> f64) -> Vec<(f64, usize, f64)> {
        let mut out = Vec::new();
        for (s, &tau) in self.grid.iter().enumerate() {
            let target = (1.0 - (-tau).exp()) * self.gamma - tol(tau);
            for (i, &v) in self.f_values[s].iter().enumerate() {
                if v < target {
                    out.push((tau, i, v));
                }
            }
        }
        out
    }
}

/// Direction `v` with `v·∇F_i^γ(y) >= γ - F_i^γ(y) - slack_i` for all `i`,
/// `v ∈ P(M)` and `y + v <= 1`, found by maximizing the common margin `t` of the
/// first family of constraints. Returns `(v, t)`; a negative optimal margin (or an
/// infeasible program) means `γ` exceeds what the polytope can support.
pub fn find_direction(
    y: &FractionalPoint,
    points: &[PointEstimate],
    gamma: f64,
    m: &PartitionMatroid,
    slack: &[f64],
) -> Result<(Vec<f64>, f64)> {
    let n = y.len();
    if m.ground_size() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.ground_size(),
        });
    }
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let v: Vec<_> = (0..n)
        .map(|e| lp.add_var(0.0, (0.0, (1.0 - y.get(e)).max(0.0))))
        .collect();
    let t = lp.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    for (i, p) in points.iter().enumerate() {
        let mut terms: Vec<_> = (0..n)
            .filter(|&e| p.gradient[e] != 0.0)
            .map(|e| (v[e], p.gradient[e]))
            .collect();
        terms.push((t, -1.0));
        let rhs = gamma - p.value - slack.get(i).copied().unwrap_or(0.0);
        lp.add_constraint(terms, ComparisonOp::Ge, rhs);
    }
    for (part, &b) in m.parts().iter().zip(m.budgets()) {
        lp.add_constraint(
            part.iter().map(|&e| (v[e], 1.0)).collect::<Vec<_>>(),
            ComparisonOp::Le,
            b as f64,
        );
    }
    let too_large = |margin: f64| Error::GammaTooLarge {
        gamma,
        slack: margin,
    };
    let sol = lp.solve().map_err(|_| too_large(f64::NEG_INFINITY))?;
    let margin = sol[t];
    if margin < -1e-9 * gamma.max(1.0) {
        return Err(too_large(margin));
    }
    let dir = v
        .iter()
        .enumerate()
        .map(|(e, &var)| sol[var].clamp(0.0, (1.0 - y.get(e)).max(0.0)))
        .collect();
    Ok((dir, margin))
}

fn partition_of(m: &dyn Matroid) -> Result<PartitionMatroid> {
    m.as_partition().ok_or_else(|| {
        Error::Unsupported("continuous greedy needs a uniform or partition matroid".into())
    })
}

fn steps_for(ell: usize, delta: f64) -> Result<usize> {
    let steps = (ell as f64 / delta).round();
    if (steps * delta - ell as f64).abs() > 1e-9 * ell as f64 || steps < 1.0 {
        return Err(Error::param(format!(
            "step size {delta} does not divide ell = {ell}"
        )));
    }
    Ok(steps as usize)
}

/// The ascent `y(τ+δ) = y(τ) + δ·v(y(τ))` from `y(0) = 0` to `τ = ℓ`, on the
/// extensions of `min{f_i, γ}`.
pub fn ascend(
    truncated: &Evaluator,
    gamma: f64,
    ell: usize,
    m: &PartitionMatroid,
    delta: f64,
) -> Result<AscentTrace> {
    let n = m.ground_size();
    let steps = steps_for(ell, delta)?;
    let base = UnionMatroid::new(Arc::new(m.clone()), 1)?;
    let mut y = FractionalPoint::zeros(n);
    let mut trace = AscentTrace {
        delta,
        ell,
        gamma,
        exact: truncated.is_exact(),
        grid: vec![0.0],
        points: vec![y.as_slice().to_vec()],
        directions: Vec::with_capacity(steps),
        direction_atoms: Vec::with_capacity(steps),
        f_values: Vec::with_capacity(steps + 1),
        margins: Vec::with_capacity(steps),
    };
    for s in 0..steps {
        let points = truncated.points(&y)?;
        trace
            .f_values
            .push(points.iter().map(|p| p.value).collect());
        let slack: Vec<f64> = points
            .iter()
            .map(|p| {
                let g = p.gradient_se.iter().map(|x| x * x).sum::<f64>().sqrt();
                3.0 * (p.value_se + g)
            })
            .collect();
        let (v, margin) = find_direction(&y, &points, gamma, m, &slack)?;
        let atoms = decompose(&FractionalPoint::new(v.clone())?, &base)?;
        let next: Vec<f64> = y
            .as_slice()
            .iter()
            .zip(&v)
            .map(|(a, b)| (a + delta * b).min(1.0))
            .collect();
        y = FractionalPoint::new(next)?;
        trace.grid.push((s + 1) as f64 * delta);
        trace.points.push(y.as_slice().to_vec());
        trace.directions.push(v);
        trace.direction_atoms.push(atoms);
        trace.margins.push(margin);
    }
    trace.f_values.push(truncated.values(&y)?);
    Ok(trace)
}

/// Ascent for the given objectives: truncates at `γ` and runs to
/// `ℓ = ⌈ln(k/ε) + ln(1/c)⌉`.
pub fn continuous_greedy_run(
    objectives: &[Oracle],
    gamma: f64,
    epsilon: f64,
    m: &dyn Matroid,
    cfg: &ContinuousConfig,
) -> Result<AscentTrace> {
    check_inputs(objectives, gamma, epsilon, cfg)?;
    let p = partition_of(m)?;
    let ell = ell_continuous(objectives.len(), epsilon, cfg.c);
    let eval = cfg.evaluator(objectives)?.truncated(gamma)?;
    ascend(&eval, gamma, ell, &p, cfg.delta)
}

fn check_inputs(
    objectives: &[Oracle],
    gamma: f64,
    epsilon: f64,
    cfg: &ContinuousConfig,
) -> Result<()> {
    if objectives.is_empty() {
        return Err(Error::param(
            "continuous greedy needs at least one objective",
        ));
    }
    check_epsilon(epsilon)?;
    cfg.validate()?;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::param(format!("gamma {gamma} must be positive")));
    }
    Ok(())
}

/// Result of the decision procedure at one `γ`.
#[derive(Debug, Clone, Serialize)]
pub enum Decision {
    Accept {
        set: ElementSet,
        witness: Vec<ElementSet>,
        values: Vec<f64>,
        ell: usize,
        draws: usize,
    },
    Reject {
        reason: String,
    },
}

impl Decision {
    pub fn is_accept(&self) -> bool {
        matches!(self, Decision::Accept { .. })
    }
}

/// Decides whether a set with `min_i f_i(S) >= (1-ε)γ` can be produced at this
/// `γ`: ascend on the truncated objectives, decompose the endpoint in `M_ℓ` and
/// try up to `cfg.repeats` swap-rounding draws. `γ = 0` accepts the empty set.
pub fn decision_solve(
    objectives: &[Oracle],
    gamma: f64,
    epsilon: f64,
    m: &dyn Matroid,
    cfg: &ContinuousConfig,
) -> Result<Decision> {
    let ell = ell_continuous(objectives.len().max(1), epsilon, cfg.c);
    if gamma == 0.0 {
        return Ok(Decision::Accept {
            set: ElementSet::new(),
            witness: vec![ElementSet::new(); ell],
            values: objectives
                .iter()
                .map(|f| f.eval(&ElementSet::new()))
                .collect(),
            ell,
            draws: 0,
        });
    }
    let trace = match continuous_greedy_run(objectives, gamma, epsilon, m, cfg) {
        Ok(t) => t,
        Err(Error::GammaTooLarge { slack, .. }) => {
            return Ok(Decision::Reject {
                reason: format!("no ascent direction (margin {slack:.3e})"),
            })
        }
        Err(e) => return Err(e),
    };
    round_endpoint(objectives, &trace, gamma, epsilon, m, cfg)
}

fn round_endpoint(
    objectives: &[Oracle],
    trace: &AscentTrace,
    gamma: f64,
    epsilon: f64,
    m: &dyn Matroid,
    cfg: &ContinuousConfig,
) -> Result<Decision> {
    let ell = trace.ell;
    let u = UnionMatroid::new(Arc::new(partition_of(m)?), ell)?;
    let d = decompose(&trace.endpoint(), &u)?;
    let target = (1.0 - epsilon) * gamma;
    for r in 0..cfg.repeats {
        let seed = cfg
            .seed
            .wrapping_add((r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let rounded = swap_round(&d, &u, seed)?;
        let values: Vec<f64> = objectives.iter().map(|f| f.eval(&rounded.set)).collect();
        if values.iter().all(|&v| v >= target * (1.0 - 1e-12)) {
            return Ok(Decision::Accept {
                set: rounded.set,
                witness: rounded.witness,
                values,
                ell,
                draws: r + 1,
            });
        }
    }
    Ok(Decision::Reject {
        reason: format!("all {} rounding draws fell below (1-ε)γ", cfg.repeats),
    })
}

/// Sweeps the `γ` grid with [`decision_solve`] and returns the set accepted at the
/// largest tried level. If every level is rejected, falls back to the extended
/// greedy reduction and flags the result.
pub fn robust_continuous_solve(
    objectives: &[Oracle],
    m: &dyn Matroid,
    epsilon: f64,
    cfg: &ContinuousConfig,
    search: GammaSearch,
) -> Result<BiCriteriaSolution> {
    if objectives.is_empty() {
        return Err(Error::param(
            "continuous solve needs at least one objective",
        ));
    }
    check_epsilon(epsilon)?;
    cfg.validate()?;
    partition_of(m)?;
    let start = Instant::now();
    let before = total_calls(objectives);
    let ell = ell_continuous(objectives.len(), epsilon, cfg.c);
    let n = m.ground_size();
    let full = ElementSet::full(n);
    let cap = objectives
        .iter()
        .map(|f| f.eval(&full))
        .fold(f64::INFINITY, f64::min)
        / (1.0 - epsilon);
    let mut candidates = gamma_candidates(objectives, epsilon)?;
    candidates.prune_above(cap * (1.0 + 1e-12));
    let base_eval = cfg.evaluator(objectives)?;

    let found = candidates.search(search, |gamma| {
        let p = partition_of(m)?;
        let eval = base_eval.truncated(gamma)?;
        let trace = match ascend(&eval, gamma, ell, &p, cfg.delta) {
            Ok(t) => t,
            Err(Error::GammaTooLarge { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        match round_endpoint(objectives, &trace, gamma, epsilon, m, cfg)? {
            Decision::Accept { witness, .. } => Ok(Some(witness)),
            Decision::Reject { .. } => Ok(None),
        }
    })?;
    match found {
        Some((gamma, mut witness)) => {
            witness.resize(ell, ElementSet::new());
            Ok(BiCriteriaSolution::assemble(
                witness,
                objectives,
                Some(gamma),
                ell,
                before,
                start,
            ))
        }
        None => {
            let mut sol = robust_matroid_solve(objectives, m, epsilon, GammaSearch::Binary)?;
            sol.fallback = true;
            sol.oracle_calls = total_calls(objectives) - before;
            sol.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            Ok(sol)
        }
    }
}
