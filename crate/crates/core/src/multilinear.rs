//! Multilinear extension `F(y) = E[f(S_y)]`, where `S_y` contains each element
//! independently with probability `y_e`: exact enumeration for small supports and
//! seeded Monte Carlo estimates otherwise, with marginals `Δ_eF` and gradients.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::Oracle;
use crate::set::ElementSet;

/// Largest number of fractional coordinates (or ground-set size, for
/// [`ExactExtension`]) handled by exact enumeration.
pub const EXACT_LIMIT: usize = 20;

/// Ground-set size up to which [`Evaluator::auto`] builds exact tables.
pub const AUTO_EXACT_LIMIT: usize = 12;

const CLAMP_TOL: f64 = 1e-12;
const CHUNK: usize = 64;

/// A point of `[0,1]^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalPoint {
    y: Vec<f64>,
}

impl FractionalPoint {
    /// Coordinates within `1e-12` outside `[0,1]` are clamped; anything further
    /// out is an error.
    pub fn new(mut y: Vec<f64>) -> Result<Self> {
        for (e, v) in y.iter_mut().enumerate() {
            if !v.is_finite() || *v < -CLAMP_TOL || *v > 1.0 + CLAMP_TOL {
                return Err(Error::param(format!(
                    "coordinate {e} = {v} is outside [0, 1]"
                )));
            }
            *v = v.clamp(0.0, 1.0);
        }
        Ok(Self { y })
    }

    pub fn zeros(n: usize) -> Self {
        Self { y: vec![0.0; n] }
    }

    pub fn indicator(n: usize, set: &ElementSet) -> Self {
        let mut y = vec![0.0; n];
        for e in set {
            y[e] = 1.0;
        }
        Self { y }
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.y
    }

    pub fn get(&self, e: usize) -> f64 {
        self.y[e]
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.y
    }

    /// Copy with coordinate `e` replaced by `v`.
    pub fn with_coord(&self, e: usize, v: f64) -> Self {
        let mut y = self.y.clone();
        y[e] = v.clamp(0.0, 1.0);
        Self { y }
    }

    /// Elements with `0 < y_e < 1`.
    pub fn fractional_support(&self) -> Vec<usize> {
        (0..self.y.len())
            .filter(|&e| self.y[e] > 0.0 && self.y[e] < 1.0)
            .collect()
    }

    /// Elements with `y_e = 1`.
    pub fn ones(&self) -> ElementSet {
        (0..self.y.len()).filter(|&e| self.y[e] >= 1.0).collect()
    }
}

/// Monte Carlo settings. `samples = None` selects `64·n` sets per value estimate
/// and `32·n` per marginal or gradient estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub samples: Option<usize>,
    pub seed: u64,
    #[serde(default)]
    pub antithetic: bool,
}

impl EstimatorConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples: Some(samples),
            seed,
            antithetic: false,
        }
    }

    pub fn value_samples(&self, n: usize) -> usize {
        self.samples.unwrap_or(64 * n).max(1)
    }

    pub fn delta_samples(&self, n: usize) -> usize {
        self.samples.unwrap_or(32 * n).max(1)
    }

    fn validate(&self) -> Result<()> {
        if self.samples == Some(0) {
            return Err(Error::param("estimator needs at least one sample"));
        }
        Ok(())
    }
}

/// A sample mean with its standard error (zero when fewer than two observations).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// Value and gradient of one extension at one point. `gradient[e]` is `∂F/∂y_e`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointEstimate {
    pub value: f64,
    pub value_se: f64,
    pub gradient: Vec<f64>,
    pub gradient_se: Vec<f64>,
}

impl PointEstimate {
    /// `Δ_eF(y) = (1 - y_e)·∂F/∂y_e`.
    pub fn delta(&self, y: &FractionalPoint) -> Vec<f64> {
        self.gradient
            .iter()
            .zip(y.as_slice())
            .map(|(g, ye)| (1.0 - ye) * g)
            .collect()
    }
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn check_dim(f: &Oracle, y: &FractionalPoint) -> Result<()> {
    if f.ground_size() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: f.ground_size(),
            got: y.len(),
        });
    }
    Ok(())
}

/// `sum_S f(S) prod_{e in S} y_e prod_{e not in S} (1 - y_e)`, enumerating only the
/// fractional coordinates (at most [`EXACT_LIMIT`] of them).
pub fn multilinear_exact(f: &Oracle, y: &FractionalPoint) -> Result<f64> {
    check_dim(f, y)?;
    let support = y.fractional_support();
    if support.len() > EXACT_LIMIT {
        return Err(Error::SizeLimit {
            what: "exact multilinear extension",
            size: support.len(),
            limit: EXACT_LIMIT,
        });
    }
    let base = y.ones();
    let probs = subset_probabilities(&support.iter().map(|&e| y.get(e)).collect::<Vec<_>>());
    Ok(compensated_sum(
        (0..probs.len()).filter(|&m| probs[m] > 0.0).map(|m| {
            let mut s = base.clone();
            for (i, &e) in support.iter().enumerate() {
                if m & (1 << i) != 0 {
                    s.insert(e);
                }
            }
            probs[m] * f.eval(&s)
        }),
    ))
}

/// `Δ_eF(y) = F(y | y_e = 1) - F(y)` by exact enumeration.
pub fn delta_e_exact(f: &Oracle, y: &FractionalPoint, e: usize) -> Result<f64> {
    check_element(y, e)?;
    Ok(multilinear_exact(f, &y.with_coord(e, 1.0))? - multilinear_exact(f, y)?)
}

fn check_element(y: &FractionalPoint, e: usize) -> Result<()> {
    if e >= y.len() {
        return Err(Error::ElementOutOfRange {
            element: e,
            n: y.len(),
        });
    }
    Ok(())
}

/// Probability of every subset (as a bit mask over the listed coordinates).
fn subset_probabilities(p: &[f64]) -> Vec<f64> {
    let mut probs = vec![0.0; 1 << p.len()];
    probs[0] = 1.0;
    let mut len = 1;
    for (i, &pi) in p.iter().enumerate() {
        for m in 0..len {
            probs[m | (1 << i)] = probs[m] * pi;
            probs[m] *= 1.0 - pi;
        }
        len <<= 1;
    }
    probs
}

/// The uniforms behind sample `index`: an independent ChaCha stream per sample,
/// so results do not depend on how samples are split across threads.
fn sample_uniforms(seed: u64, index: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..n).map(|_| rng.gen::<f64>()).collect()
}

/// The random sets of observation `index`: one set, or an antithetic pair
/// `{u < y}` and `{1 - u < y}`.
fn observation_sets(y: &FractionalPoint, cfg: &EstimatorConfig, index: u64) -> Vec<ElementSet> {
    let u = sample_uniforms(cfg.seed, index, y.len());
    let ys = y.as_slice();
    let first: ElementSet = (0..ys.len()).filter(|&e| u[e] < ys[e]).collect();
    if cfg.antithetic {
        let second: ElementSet = (0..ys.len()).filter(|&e| 1.0 - u[e] < ys[e]).collect();
        vec![first, second]
    } else {
        vec![first]
    }
}

fn observations(samples: usize, antithetic: bool) -> usize {
    if antithetic {
        samples.div_ceil(2)
    } else {
        samples
    }
}

/// Running sums for means and standard errors over many coordinates.
#[derive(Clone)]
struct Moments {
    sum: Vec<f64>,
    sumsq: Vec<f64>,
}

impl Moments {
    fn new(dim: usize) -> Self {
        Self {
            sum: vec![0.0; dim],
            sumsq: vec![0.0; dim],
        }
    }

    fn push(&mut self, obs: &[f64]) {
        for (i, &v) in obs.iter().enumerate() {
            self.sum[i] += v;
            self.sumsq[i] += v * v;
        }
    }

    fn merge(&mut self, other: &Moments) {
        for i in 0..self.sum.len() {
            self.sum[i] += other.sum[i];
            self.sumsq[i] += other.sumsq[i];
        }
    }

    fn estimate(&self, i: usize, m: usize) -> Estimate {
        let mf = m as f64;
        let mean = self.sum[i] / mf;
        let std_error = if m < 2 {
            0.0
        } else {
            let var = ((self.sumsq[i] - self.sum[i] * mean) / (mf - 1.0)).max(0.0);
            (var / mf).sqrt()
        };
        Estimate {
            value: mean,
            std_error,
        }
    }
}

/// Accumulates `observe(index)` over `0..m` in fixed-size chunks. Chunks run in
/// parallel and are merged in index order, so the result is independent of the
/// thread count.
fn accumulate(m: usize, dim: usize, observe: impl Fn(u64) -> Vec<f64> + Sync) -> Moments {
    let chunks: Vec<Moments> = (0..m.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = Moments::new(dim);
            for idx in c * CHUNK..((c + 1) * CHUNK).min(m) {
                acc.push(&observe(idx as u64));
            }
            acc
        })
        .collect();
    let mut total = Moments::new(dim);
    for c in &chunks {
        total.merge(c);
    }
    total
}

/// Unbiased Monte Carlo estimate of `F(y)`, deterministic given the seed.
pub fn multilinear_estimate(
    f: &Oracle,
    y: &FractionalPoint,
    cfg: &EstimatorConfig,
) -> Result<Estimate> {
    check_dim(f, y)?;
    cfg.validate()?;
    let m = observations(cfg.value_samples(y.len()), cfg.antithetic);
    let moments = accumulate(m, 1, |idx| {
        let sets = observation_sets(y, cfg, idx);
        let v = sets.iter().map(|s| f.eval(s)).sum::<f64>() / sets.len() as f64;
        vec![v]
    });
    Ok(moments.estimate(0, m))
}

/// Monte Carlo estimate of `Δ_eF(y) = E[f(S + e) - f(S)]`, evaluating both terms on
/// the same random set.
pub fn delta_e(
    f: &Oracle,
    y: &FractionalPoint,
    e: usize,
    cfg: &EstimatorConfig,
) -> Result<Estimate> {
    check_dim(f, y)?;
    check_element(y, e)?;
    cfg.validate()?;
    let m = observations(cfg.delta_samples(y.len()), cfg.antithetic);
    let moments = accumulate(m, 1, |idx| {
        let sets = observation_sets(y, cfg, idx);
        let v = sets
            .iter()
            .map(|s| {
                if s.contains(e) {
                    0.0
                } else {
                    f.eval(&s.with(e)) - f.eval(s)
                }
            })
            .sum::<f64>()
            / sets.len() as f64;
        vec![v]
    });
    Ok(moments.estimate(0, m))
}

/// Values and gradients of several extensions at `y` from one shared pool of
/// random sets: every sampled set is evaluated by every objective, and each set
/// `S` yields `f(S ∪ e) - f(S \ e)` for all `e` at `n + 1` calls per objective.
pub fn estimate_point(
    objectives: &[Oracle],
    y: &FractionalPoint,
    cfg: &EstimatorConfig,
) -> Result<Vec<PointEstimate>> {
    for f in objectives {
        check_dim(f, y)?;
    }
    cfg.validate()?;
    let n = y.len();
    let k = objectives.len();
    let m = observations(cfg.delta_samples(n), cfg.antithetic);
    // Layout per objective: [value, grad_0, .., grad_{n-1}].
    let stride = n + 1;
    let moments = accumulate(m, k * stride, |idx| {
        let sets = observation_sets(y, cfg, idx);
        let scale = 1.0 / sets.len() as f64;
        let mut obs = vec![0.0; k * stride];
        for s in &sets {
            for (i, f) in objectives.iter().enumerate() {
                let fs = f.eval(s);
                obs[i * stride] += scale * fs;
                for e in 0..n {
                    let d = if s.contains(e) {
                        fs - f.eval(&s.without(e))
                    } else {
                        f.eval(&s.with(e)) - fs
                    };
                    obs[i * stride + 1 + e] += scale * d;
                }
            }
        }
        obs
    });
    Ok((0..k)
        .map(|i| {
            let v = moments.estimate(i * stride, m);
            let grads: Vec<Estimate> = (0..n)
                .map(|e| moments.estimate(i * stride + 1 + e, m))
                .collect();
            PointEstimate {
                value: v.value,
                value_se: v.std_error,
                gradient: grads.iter().map(|g| g.value).collect(),
                gradient_se: grads.iter().map(|g| g.std_error).collect(),
            }
        })
        .collect())
}

/// Exact extension backed by a table of all `2^n` values, for repeated queries.
#[derive(Debug, Clone)]
pub struct ExactExtension {
    n: usize,
    table: Vec<f64>,
}

impl ExactExtension {
    /// Evaluates `f` on every subset (`2^n` oracle calls).
    pub fn new(f: &Oracle) -> Result<Self> {
        let n = f.ground_size();
        if n > EXACT_LIMIT {
            return Err(Error::SizeLimit {
                what: "exact multilinear table",
                size: n,
                limit: EXACT_LIMIT,
            });
        }
        let table = (0..1u64 << n)
            .into_par_iter()
            .map(|m| f.eval(&ElementSet::from_mask(m)))
            .collect();
        Ok(Self { n, table })
    }

    pub fn from_table(n: usize, table: Vec<f64>) -> Result<Self> {
        if table.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                got: table.len(),
            });
        }
        Ok(Self { n, table })
    }

    /// Extension of `min{f, γ}`.
    pub fn truncated(&self, gamma: f64) -> Self {
        Self {
            n: self.n,
            table: self.table.iter().map(|v| v.min(gamma)).collect(),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn set_value(&self, set: &ElementSet) -> f64 {
        self.table[set.to_mask().expect("set within table range") as usize]
    }

    fn check(&self, y: &FractionalPoint) -> Result<()> {
        if y.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: y.len(),
            });
        }
        Ok(())
    }

    pub fn value(&self, y: &FractionalPoint) -> Result<f64> {
        self.check(y)?;
        let probs = subset_probabilities(y.as_slice());
        Ok(compensated_sum(
            probs.iter().zip(&self.table).map(|(p, v)| p * v),
        ))
    }

    /// `∂F/∂y_e = F(y | y_e = 1) - F(y | y_e = 0)` for every `e`.
    pub fn gradient(&self, y: &FractionalPoint) -> Result<Vec<f64>> {
        self.check(y)?;
        Ok((0..self.n)
            .map(|e| {
                let probs = subset_probabilities(y.with_coord(e, 0.0).as_slice());
                let bit = 1usize << e;
                compensated_sum(
                    (0..probs.len())
                        .filter(|m| m & bit == 0)
                        .map(|m| probs[m] * (self.table[m | bit] - self.table[m])),
                )
            })
            .collect())
    }

    pub fn point(&self, y: &FractionalPoint) -> Result<PointEstimate> {
        Ok(PointEstimate {
            value: self.value(y)?,
            value_se: 0.0,
            gradient: self.gradient(y)?,
            gradient_se: vec![0.0; self.n],
        })
    }
}

/// Source of values and gradients for a fixed list of objectives: exact tables
/// or Monte Carlo with a fresh sub-seed per query.
#[derive(Debug)]
pub enum Evaluator {
    Exact(Vec<ExactExtension>),
    Sampled {
        objectives: Vec<Oracle>,
        cfg: EstimatorConfig,
        queries: AtomicU64,
    },
}

impl Evaluator {
    pub fn exact(objectives: &[Oracle]) -> Result<Self> {
        Ok(Self::Exact(
            objectives
                .iter()
                .map(ExactExtension::new)
                .collect::<Result<_>>()?,
        ))
    }

    pub fn sampled(objectives: &[Oracle], cfg: EstimatorConfig) -> Self {
        Self::Sampled {
            objectives: objectives.to_vec(),
            cfg,
            queries: AtomicU64::new(0),
        }
    }

    /// Exact when the ground set is small enough, sampled otherwise.
    pub fn auto(objectives: &[Oracle], cfg: EstimatorConfig) -> Result<Self> {
        match objectives.first() {
            Some(f) if f.ground_size() <= AUTO_EXACT_LIMIT => Self::exact(objectives),
            _ => Ok(Self::sampled(objectives, cfg)),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    pub fn k(&self) -> usize {
        match self {
            Self::Exact(t) => t.len(),
            Self::Sampled { objectives, .. } => objectives.len(),
        }
    }

    /// Extensions of `min{f_i, γ}`.
    pub fn truncated(&self, gamma: f64) -> Result<Self> {
        Ok(match self {
            Self::Exact(tables) => Self::Exact(tables.iter().map(|t| t.truncated(gamma)).collect()),
            Self::Sampled {
                objectives, cfg, ..
            } => Self::sampled(
                &objectives
                    .iter()
                    .map(|f| {
                        Ok(Oracle::new(crate::functions::Truncated::new(
                            f.clone(),
                            gamma,
                        )?))
                    })
                    .collect::<Result<Vec<_>>>()?,
                *cfg,
            ),
        })
    }

    pub fn values(&self, y: &FractionalPoint) -> Result<Vec<f64>> {
        match self {
            Self::Exact(tables) => tables.iter().map(|t| t.value(y)).collect(),
            Self::Sampled { .. } => Ok(self.points(y)?.into_iter().map(|p| p.value).collect()),
        }
    }

    pub fn points(&self, y: &FractionalPoint) -> Result<Vec<PointEstimate>> {
        match self {
            Self::Exact(tables) => tables.iter().map(|t| t.point(y)).collect(),
            Self::Sampled {
                objectives,
                cfg,
                queries,
            } => {
                let q = queries.fetch_add(1, Ordering::Relaxed);
                let sub = EstimatorConfig {
                    seed: cfg.seed ^ q.wrapping_mul(0x9E37_79B9_7F4A_7C15),
                    ..*cfg
                };
                estimate_point(objectives, y, &sub)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{Coverage, Modular};

    fn modular(w: &[f64]) -> Oracle {
        Oracle::new(Modular::new(w.to_vec()).unwrap())
    }

    #[test]
    fn indicator_recovers_set_value() {
        let f =
            Oracle::new(Coverage::unweighted(vec![vec![0, 1], vec![1], vec![2, 3]], 4).unwrap());
        let s: ElementSet = [0, 2].into_iter().collect();
        let y = FractionalPoint::indicator(3, &s);
        assert_eq!(multilinear_exact(&f, &y).unwrap(), f.eval(&s));
        let est = multilinear_estimate(&f, &y, &EstimatorConfig::new(50, 1)).unwrap();
        assert_eq!(est.value, f.eval(&s));
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn modular_is_linear() {
        let f = modular(&[1.0, 2.0, 3.0]);
        let y = FractionalPoint::new(vec![0.2, 0.5, 0.9]).unwrap();
        assert!((multilinear_exact(&f, &y).unwrap() - (0.2 + 1.0 + 2.7)).abs() < 1e-12);
        let est = multilinear_estimate(&f, &y, &EstimatorConfig::new(10_000, 4)).unwrap();
        assert!((est.value - 3.9).abs() <= 4.0 * est.std_error);
    }

    #[test]
    fn half_point_is_mean_over_subsets() {
        let f =
            Oracle::new(Coverage::unweighted(vec![vec![0, 1], vec![1, 2], vec![3]], 4).unwrap());
        let y = FractionalPoint::new(vec![0.5; 3]).unwrap();
        let mean = (0..8u64)
            .map(|m| f.eval(&ElementSet::from_mask(m)))
            .sum::<f64>()
            / 8.0;
        assert!((multilinear_exact(&f, &y).unwrap() - mean).abs() < 1e-12);
    }

    #[test]
    fn clamps_drift_and_rejects_out_of_range() {
        let y = FractionalPoint::new(vec![1.0 + 1e-13, -1e-13]).unwrap();
        assert_eq!(y.as_slice(), &[1.0, 0.0]);
        assert!(FractionalPoint::new(vec![1.1]).is_err());
    }

    #[test]
    fn delta_of_modular() {
        let f = modular(&[2.0, 5.0]);
        let y = FractionalPoint::new(vec![0.25, 1.0]).unwrap();
        assert!((delta_e_exact(&f, &y, 0).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(delta_e_exact(&f, &y, 1).unwrap(), 0.0);
        let est = delta_e(&f, &y, 0, &EstimatorConfig::new(20_000, 7)).unwrap();
        assert!((est.value - 1.5).abs() <= 4.0 * est.std_error + 1e-12);
    }

    #[test]
    fn table_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = Oracle::new(Coverage::random(7, 9, 0.3, &mut rng));
        let ext = ExactExtension::new(&f).unwrap();
        for _ in 0..10 {
            let y = FractionalPoint::new((0..7).map(|_| rng.gen::<f64>()).collect()).unwrap();
            assert!((ext.value(&y).unwrap() - multilinear_exact(&f, &y).unwrap()).abs() < 1e-10);
            let grad = ext.gradient(&y).unwrap();
            for (e, g) in grad.iter().enumerate() {
                let d = delta_e_exact(&f, &y, e).unwrap();
                assert!((d - (1.0 - y.get(e)) * g).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn shared_pool_gradient_is_unbiased() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = Oracle::new(Coverage::random(6, 8, 0.35, &mut rng));
        let ext = ExactExtension::new(&f).unwrap();
        let y = FractionalPoint::new((0..6).map(|_| rng.gen::<f64>()).collect()).unwrap();
        let exact = ext.point(&y).unwrap();
        for antithetic in [false, true] {
            let cfg = EstimatorConfig {
                samples: Some(20_000),
                seed: 3,
                antithetic,
            };
            let est = &estimate_point(std::slice::from_ref(&f), &y, &cfg).unwrap()[0];
            assert!((est.value - exact.value).abs() <= 4.0 * est.value_se + 1e-12);
            for e in 0..6 {
                assert!(
                    (est.gradient[e] - exact.gradient[e]).abs() <= 4.0 * est.gradient_se[e] + 1e-12
                );
            }
        }
    }

    #[test]
    fn estimates_are_reproducible() {
        let f = modular(&[1.0, 0.5, 0.25, 2.0]);
        let y = FractionalPoint::new(vec![0.3, 0.6, 0.1, 0.8]).unwrap();
        let cfg = EstimatorConfig::new(500, 42);
        let a = multilinear_estimate(&f, &y, &cfg).unwrap();
        let b = multilinear_estimate(&f, &y, &cfg).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let c = pool.install(|| multilinear_estimate(&f, &y, &cfg).unwrap());
        assert_eq!(a, c);
    }

    #[test]
    fn exact_limit_applies_to_fractional_support() {
        let f = modular(&[1.0; 24]);
        let mut y = vec![1.0; 24];
        y[0] = 0.5;
        assert!(
            (multilinear_exact(&f, &FractionalPoint::new(y).unwrap()).unwrap() - 23.5).abs()
                < 1e-12
        );
        assert!(matches!(
            multilinear_exact(&f, &FractionalPoint::new(vec![0.5; 24]).unwrap()),
            Err(Error::SizeLimit { .. })
        ));
    }
}
