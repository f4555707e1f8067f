use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Oracle, SetFunction};
use crate::error::{Error, Result};
use crate::set::ElementSet;

/// `f(S) = sum_{e in S} w_e` with non-negative weights.
#[derive(Debug, Clone)]
pub struct Modular {
    weights: Vec<f64>,
}

impl Modular {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::param("modular function needs at least one weight"));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::param(format!(
                "modular weight {w} is not a finite non-negative number"
            )));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl SetFunction for Modular {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        set.iter().map(|e| self.weights[e]).sum()
    }
}

/// Weighted coverage: element `e` covers the items `covers[e]`, and
/// `f(S)` is the total weight of the items covered by `S`.
#[derive(Debug, Clone)]
pub struct Coverage {
    covers: Vec<ElementSet>,
    item_weights: Vec<f64>,
}

impl Coverage {
    pub fn new(covers: Vec<Vec<usize>>, item_weights: Vec<f64>) -> Result<Self> {
        if covers.is_empty() {
            return Err(Error::param("coverage function needs at least one element"));
        }
        let m = item_weights.len();
        if let Some(&bad) = covers.iter().flatten().find(|&&i| i >= m) {
            return Err(Error::param(format!(
                "covered item {bad} has no weight (only {m} items)"
            )));
        }
        if item_weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::param(
                "coverage item weights must be finite and non-negative",
            ));
        }
        Ok(Self {
            covers: covers
                .into_iter()
                .map(|c| c.into_iter().collect())
                .collect(),
            item_weights,
        })
    }

    /// Unit item weights.
    pub fn unweighted(covers: Vec<Vec<usize>>, items: usize) -> Result<Self> {
        Self::new(covers, vec![1.0; items])
    }

    /// Random instance: every element covers each of `items` items independently with
    /// probability `density`; item weights uniform in `[0, 1)`.
    pub fn random<R: Rng + ?Sized>(n: usize, items: usize, density: f64, rng: &mut R) -> Self {
        let covers = (0..n)
            .map(|_| (0..items).filter(|_| rng.gen_bool(density)).collect())
            .collect();
        let weights = (0..items).map(|_| rng.gen::<f64>()).collect();
        Self::new(covers, weights).expect("generated coverage instance is valid")
    }

    pub fn total_weight(&self) -> f64 {
        self.item_weights.iter().sum()
    }
}

impl SetFunction for Coverage {
    fn ground_size(&self) -> usize {
        self.covers.len()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        let mut covered = ElementSet::new();
        for e in set {
            covered.union_with(&self.covers[e]);
        }
        covered.iter().map(|i| self.item_weights[i]).sum()
    }
}

/// Facility location over a user-by-element ratings matrix:
/// `f(A) = 1 / (r_max |U|) * sum_u max_{e in A} ratings[u][e]`.
#[derive(Debug, Clone)]
pub struct FacilityLocation {
    users: usize,
    r_max: f64,
    // Non-zero ratings per element, (user, rating).
    columns: Vec<Vec<(u32, f64)>>,
}

impl FacilityLocation {
    pub fn new(ratings: Vec<Vec<f64>>, r_max: f64) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::param(format!("r_max must be positive, got {r_max}")));
        }
        let users = ratings.len();
        if users == 0 {
            return Err(Error::param("ratings matrix has no users"));
        }
        let n = ratings[0].len();
        if n == 0 {
            return Err(Error::param("ratings matrix has no elements"));
        }
        let mut columns = vec![Vec::new(); n];
        for (u, row) in ratings.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for (e, &r) in row.iter().enumerate() {
                if !(0.0..=r_max).contains(&r) {
                    return Err(Error::param(format!(
                        "rating {r} of user {u} for element {e} outside [0, {r_max}]"
                    )));
                }
                if r > 0.0 {
                    columns[e].push((u as u32, r));
                }
            }
        }
        Ok(Self {
            users,
            r_max,
            columns,
        })
    }

    pub fn users(&self) -> usize {
        self.users
    }
}

impl SetFunction for FacilityLocation {
    fn ground_size(&self) -> usize {
        self.columns.len()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        let mut best = vec![0.0f64; self.users];
        for e in set {
            for &(u, r) in &self.columns[e] {
                let b = &mut best[u as usize];
                if r > *b {
                    *b = r;
                }
            }
        }
        best.iter().sum::<f64>() / (self.r_max * self.users as f64)
    }
}

type BoxedSetFn = Box<dyn Fn(&ElementSet) -> f64 + Send + Sync>;

/// Arbitrary closure as a set function. No properties are assumed; run
/// [`check_submodular_monotone`](super::check_submodular_monotone) before trusting it.
pub struct FnFunction {
    n: usize,
    f: BoxedSetFn,
}

impl FnFunction {
    pub fn new(n: usize, f: impl Fn(&ElementSet) -> f64 + Send + Sync + 'static) -> Self {
        Self { n, f: Box::new(f) }
    }
}

impl SetFunction for FnFunction {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, set: &ElementSet) -> f64 {
        (self.f)(set)
    }
}

/// `k` perturbations of a base function: member `i` is
/// `f(A) + scale * sum_{e in A ∩ Λ_i} ξ_e`.
///
/// `ξ` and the sets `Λ_i` are drawn once from the seed and then frozen, so each
/// member is a deterministic oracle. The additive term is modular with
/// non-negative coefficients, so members inherit monotonicity and submodularity.
#[derive(Debug, Clone)]
pub struct PerturbedFamily {
    base: Oracle,
    lambdas: Vec<ElementSet>,
    xi: Arc<Vec<f64>>,
    scale: f64,
}

impl PerturbedFamily {
    pub fn new(base: Oracle, lambdas: Vec<ElementSet>, xi: Vec<f64>, scale: f64) -> Result<Self> {
        let n = base.ground_size();
        if lambdas.is_empty() {
            return Err(Error::param("perturbed family needs k >= 1 members"));
        }
        if xi.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: xi.len(),
            });
        }
        if !(scale.is_finite() && scale >= 0.0) {
            return Err(Error::param(format!(
                "noise scale must be non-negative, got {scale}"
            )));
        }
        if let Some(e) = lambdas.iter().map(ElementSet::bound).find(|&b| b > n) {
            return Err(Error::ElementOutOfRange { element: e - 1, n });
        }
        Ok(Self {
            base,
            lambdas,
            xi: Arc::new(xi),
            scale,
        })
    }

    /// Draws `k` random sets of size `lambda_size` and noise `ξ ~ U[0,1]^n`.
    pub fn generate(
        base: Oracle,
        k: usize,
        lambda_size: usize,
        scale: f64,
        seed: u64,
    ) -> Result<Self> {
        let n = base.ground_size();
        if lambda_size > n {
            return Err(Error::param(format!(
                "lambda_size {lambda_size} exceeds ground set size {n}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xi: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let lambdas = (0..k)
            .map(|_| sample(&mut rng, n, lambda_size).into_iter().collect())
            .collect();
        Self::new(base, lambdas, xi, scale)
    }

    pub fn k(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[ElementSet] {
        &self.lambdas
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn base(&self) -> &Oracle {
        &self.base
    }

    /// One oracle per member, each with its own counter.
    pub fn members(&self) -> Vec<Oracle> {
        self.lambdas
            .iter()
            .map(|l| {
                Oracle::new(PerturbedMember {
                    base: self.base.clone(),
                    lambda: l.clone(),
                    xi: Arc::clone(&self.xi),
                    scale: self.scale,
                })
            })
            .collect()
    }
}

pub struct PerturbedMember {
    base: Oracle,
    lambda: ElementSet,
    xi: Arc<Vec<f64>>,
    scale: f64,
}

impl SetFunction for PerturbedMember {
    fn ground_size(&self) -> usize {
        self.base.ground_size()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        let noise: f64 = set
            .intersection(&self.lambda)
            .iter()
            .map(|e| self.xi[e])
            .sum();
        self.base.eval(set) + self.scale * noise
    }
}
