use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::functions::{mix, Oracle};
use crate::set::ElementSet;

/// A non-adaptive sequence of objective collections, fixed before any play.
#[derive(Debug, Clone)]
pub struct OnlineSchedule {
    n: usize,
    k: usize,
    rounds: Vec<Vec<Oracle>>,
}

impl OnlineSchedule {
    /// Every round must hold `k` monotone objectives on the same ground set with
    /// values in `[0, 1]`; for monotone functions it suffices to check `f(∅) >= 0`
    /// and `f(V) <= 1`.
    pub fn new(rounds: Vec<Vec<Oracle>>) -> Result<Self> {
        let first = rounds
            .first()
            .ok_or_else(|| Error::param("online schedule needs at least one round"))?;
        let k = first.len();
        let n = first
            .first()
            .ok_or_else(|| Error::param("online schedule needs at least one objective per round"))?
            .ground_size();
        let empty = ElementSet::new();
        let full = ElementSet::full(n);
        for (t, round) in rounds.iter().enumerate() {
            if round.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    got: round.len(),
                });
            }
            for f in round {
                if f.ground_size() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: f.ground_size(),
                    });
                }
                let (lo, hi) = (f.eval(&empty), f.eval(&full));
                if !(lo >= 0.0 && hi <= 1.0 + 1e-12) {
                    return Err(Error::param(format!(
                        "round {} objective leaves [0, 1]: f(∅) = {lo}, f(V) = {hi}",
                        t + 1
                    )));
                }
            }
        }
        Ok(Self { n, k, rounds })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn horizon(&self) -> usize {
        self.rounds.len()
    }

    /// Objectives revealed at round `t` (zero-based).
    pub fn round(&self, t: usize) -> &[Oracle] {
        &self.rounds[t]
    }

    pub fn rounds(&self) -> &[Vec<Oracle>] {
        &self.rounds
    }

    /// The same collection every round.
    pub fn stationary(objectives: &[Oracle], horizon: usize) -> Result<Self> {
        Self::new(vec![objectives.to_vec(); horizon])
    }

    /// Round `t` uses `w·f_i + (1 - w)·f_{i+1 mod k}` with
    /// `w = (1 + sin(2π t / period + φ_i)) / 2` and phases `φ_i` drawn from the
    /// seed. Convex combinations keep values in `[0, 1]` and preserve monotone
    /// submodularity.
    pub fn drifting(
        objectives: &[Oracle],
        horizon: usize,
        period: usize,
        seed: u64,
    ) -> Result<Self> {
        if period == 0 {
            return Err(Error::param("drift period must be positive"));
        }
        let k = objectives.len();
        if k == 0 {
            return Err(Error::param(
                "drifting schedule needs at least one objective",
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phases: Vec<f64> = (0..k).map(|_| rng.gen::<f64>() * TAU).collect();
        let rounds = (0..horizon)
            .map(|t| {
                (0..k)
                    .map(|i| {
                        let w = 0.5 * (1.0 + (TAU * t as f64 / period as f64 + phases[i]).sin());
                        let mut q = vec![0.0; k];
                        q[i] += w;
                        q[(i + 1) % k] += 1.0 - w;
                        mix(&q, objectives)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rounds)
    }

    /// Starts with `a` and alternates between `a` and `b` at each listed round
    /// (zero-based, increasing).
    pub fn switching(
        a: &[Oracle],
        b: &[Oracle],
        horizon: usize,
        switch_times: &[usize],
    ) -> Result<Self> {
        if switch_times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("switch times must be strictly increasing"));
        }
        let mut use_b = false;
        let mut next = switch_times.iter().peekable();
        let rounds = (0..horizon)
            .map(|t| {
                while next.peek().is_some_and(|&&s| s <= t) {
                    next.next();
                    use_b = !use_b;
                }
                if use_b {
                    b.to_vec()
                } else {
                    a.to_vec()
                }
            })
            .collect();
        Self::new(rounds)
    }
}
