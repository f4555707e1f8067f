use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matroid::{max_weight_independent_set, Matroid};
use crate::set::ElementSet;

/// Follow-the-perturbed-leader over a decision set with a linear-maximization
/// oracle. The perturbation `q ~ U[0, 1/η]^n` is drawn once.
#[derive(Debug, Clone, Serialize)]
pub struct FplInstance {
    pub eta: f64,
    pub q: Vec<f64>,
    pub cumulative: Vec<f64>,
    pub rounds: usize,
}

impl FplInstance {
    pub fn new<R: Rng + ?Sized>(n: usize, eta: f64, rng: &mut R) -> Result<Self> {
        check_eta(eta)?;
        let q = (0..n).map(|_| rng.gen::<f64>() / eta).collect();
        Ok(Self::with_perturbation(q, eta))
    }

    /// Fixed perturbation; `q = 0` gives plain follow-the-leader.
    pub fn with_perturbation(q: Vec<f64>, eta: f64) -> Self {
        let n = q.len();
        Self {
            eta,
            q,
            cumulative: vec![0.0; n],
            rounds: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    /// `Σ_{j<t} s_j + q`.
    pub fn scores(&self) -> Vec<f64> {
        self.cumulative
            .iter()
            .zip(&self.q)
            .map(|(c, q)| c + q)
            .collect()
    }

    pub fn decide<D>(&self, oracle: impl FnOnce(&[f64]) -> D) -> D {
        oracle(&self.scores())
    }

    /// Decision over the polytope of `m`: a maximum-weight independent set.
    pub fn decide_matroid(&self, m: &dyn Matroid) -> ElementSet {
        max_weight_independent_set(m, &self.scores())
    }

    /// Index of the best explicit decision vector, ties to the smallest index.
    pub fn decide_explicit(&self, decisions: &[Vec<f64>]) -> usize {
        argmax_linear(decisions, &self.scores())
    }

    pub fn observe(&mut self, reward: &[f64]) -> Result<()> {
        if reward.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: reward.len(),
            });
        }
        for (c, s) in self.cumulative.iter_mut().zip(reward) {
            *c += s;
        }
        self.rounds += 1;
        Ok(())
    }

    /// Replaces the perturbation (adaptive-adversary variant).
    pub fn resample<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        for q in &mut self.q {
            *q = rng.gen::<f64>() / self.eta;
        }
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::param(format!(
            "learning rate {eta} must be positive"
        )));
    }
    Ok(())
}

pub fn argmax_linear(decisions: &[Vec<f64>], w: &[f64]) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, d) in decisions.iter().enumerate() {
        let v: f64 = d.iter().zip(w).map(|(a, b)| a * b).sum();
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    best
}

/// Outcome of FPL on an explicit decision set against a fixed reward sequence.
#[derive(Debug, Clone, Serialize)]
pub struct FplRegret {
    pub reward: f64,
    pub hindsight: f64,
    pub regret: f64,
    /// Measured `max |d·s|`.
    pub l: f64,
    /// Measured `max ‖s‖₁`.
    pub a: f64,
    /// Measured `max ‖d - d'‖₁`.
    pub d: f64,
}

impl FplRegret {
    /// `η·L·A·T + D/η`.
    pub fn bound(&self, eta: f64, t: usize) -> f64 {
        eta * self.l * self.a * t as f64 + self.d / eta
    }
}

/// Plays FPL with perturbation `q` against `rewards` over explicit `decisions`.
pub fn fpl_explicit_regret(
    decisions: &[Vec<f64>],
    rewards: &[Vec<f64>],
    q: Vec<f64>,
    eta: f64,
) -> Result<FplRegret> {
    if decisions.is_empty() {
        return Err(Error::param("FPL needs at least one decision"));
    }
    let n = q.len();
    let mut inst = FplInstance::with_perturbation(q, eta);
    let mut reward = 0.0;
    let mut totals = vec![0.0; decisions.len()];
    let mut l = 0.0f64;
    let mut a = 0.0f64;
    for s in rewards {
        let d = inst.decide_explicit(decisions);
        reward += dot(&decisions[d], s);
        for (tot, dec) in totals.iter_mut().zip(decisions) {
            let v = dot(dec, s);
            *tot += v;
            l = l.max(v.abs());
        }
        a = a.max(s.iter().map(|x| x.abs()).sum());
        inst.observe(s)?;
    }
    let mut diam = 0.0f64;
    for x in decisions {
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        for y in decisions {
            diam = diam.max(x.iter().zip(y).map(|(p, q)| (p - q).abs()).sum());
        }
    }
    let hindsight = totals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(FplRegret {
        reward,
        hindsight,
        regret: hindsight - reward,
        l,
        a,
        d: diam,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::UniformMatroid;

    #[test]
    fn zero_perturbation_first_round_is_tie_break() {
        let inst = FplInstance::with_perturbation(vec![0.0; 3], 1.0);
        assert_eq!(
            inst.decide_explicit(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]),
            0
        );
        assert!(inst.decide_matroid(&UniformMatroid::new(3, 2)).is_empty());
    }

    #[test]
    fn constant_rewards_win_over_perturbation() {
        let mut inst = FplInstance::with_perturbation(vec![5.0, 0.0], 0.2);
        let decisions = [vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(inst.decide_explicit(&decisions), 0);
        for _ in 0..6 {
            inst.observe(&[0.0, 1.0]).unwrap();
        }
        assert_eq!(inst.decide_explicit(&decisions), 1);
    }

    #[test]
    fn regret_against_constant_sequence() {
        let decisions = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let rewards = vec![vec![0.0, 1.0]; 10];
        let r = fpl_explicit_regret(&decisions, &rewards, vec![2.5, 0.0], 0.4).unwrap();
        assert_eq!(r.hindsight, 10.0);
        // Leads with decision 0 until the cumulative reward passes 2.5.
        assert_eq!(r.reward, 7.0);
        assert_eq!((r.l, r.a, r.d), (1.0, 1.0, 2.0));
    }

    #[test]
    fn rejects_bad_eta() {
        let mut rng = rand::thread_rng();
        assert!(FplInstance::new(2, 0.0, &mut rng).is_err());
    }
}
