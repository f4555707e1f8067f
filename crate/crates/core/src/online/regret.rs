use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::OnlineSchedule;
use crate::error::{Error, Result};
use crate::functions::{FnFunction, Oracle};
use crate::instance::check_epsilon;
use crate::matroid::{independent_sets, Matroid};
use crate::offline::extended_greedy;
use crate::set::ElementSet;

/// Largest ground set for which the hindsight benchmark is computed exhaustively.
pub const HINDSIGHT_EXHAUSTIVE_LIMIT: usize = 16;

/// Best single independent set in hindsight, per prefix of the schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hindsight {
    /// Maximizer over the whole horizon.
    pub set: ElementSet,
    /// `max_{S ∈ I} Σ_{j <= t} min_i f_i^j(S)` for `t = 1..T`.
    pub curve: Vec<f64>,
    /// False when the value is only a lower bound from greedy.
    pub exact: bool,
}

fn round_min(round: &[Oracle], s: &ElementSet) -> f64 {
    round
        .iter()
        .map(|f| f.eval(s))
        .fold(f64::INFINITY, f64::min)
}

fn prefix_values(schedule: &OnlineSchedule, s: &ElementSet) -> Vec<f64> {
    let mut acc = 0.0;
    schedule
        .rounds()
        .iter()
        .map(|r| {
            acc += round_min(r, s);
            acc
        })
        .collect()
}

/// Exhaustive over `I` for `n <= 16`; otherwise the prefix values of the greedy
/// independent set for `Σ_t min_i f_i^t`, which only bound the benchmark below.
pub fn hindsight(schedule: &OnlineSchedule, m: &dyn Matroid) -> Result<Hindsight> {
    let n = schedule.n();
    if m.ground_size() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.ground_size(),
        });
    }
    if n > HINDSIGHT_EXHAUSTIVE_LIMIT {
        let sched = schedule.clone();
        let total = Oracle::new(FnFunction::new(n, move |s| {
            sched.rounds().iter().map(|r| round_min(r, s)).sum()
        }));
        let sol = extended_greedy(&total, m, 1)?;
        let set = sol.union;
        return Ok(Hindsight {
            curve: prefix_values(schedule, &set),
            set,
            exact: false,
        });
    }
    let sets = independent_sets(m);
    let horizon = schedule.horizon();
    let (curve, best) = sets
        .par_iter()
        .fold(
            || (vec![f64::NEG_INFINITY; horizon], None::<(f64, ElementSet)>),
            |(mut curve, best), s| {
                let p = prefix_values(schedule, s);
                for (c, v) in curve.iter_mut().zip(&p) {
                    *c = c.max(*v);
                }
                let total = p.last().copied().unwrap_or(0.0);
                (curve, better(best, Some((total, s.clone()))))
            },
        )
        .reduce(
            || (vec![f64::NEG_INFINITY; horizon], None),
            |(a, ba), (b, bb)| {
                let c = a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect();
                (c, better(ba, bb))
            },
        );
    Ok(Hindsight {
        set: best.map(|(_, s)| s).unwrap_or_default(),
        curve,
        exact: true,
    })
}

/// Larger total wins; ties go to the lexicographically smaller set.
fn better(a: Option<(f64, ElementSet)>, b: Option<(f64, ElementSet)>) -> Option<(f64, ElementSet)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if b.0 > a.0 || (b.0 == a.0 && b.1.lex_cmp(&a.1).is_lt()) {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

/// `(1-ε)`-regret of a sequence of per-round payoffs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretReport {
    pub epsilon: f64,
    /// `min_i Ê[f_i^t(S^t)]` per round.
    pub per_round_payoffs: Vec<f64>,
    pub hindsight_value: f64,
    pub hindsight_set: ElementSet,
    pub hindsight_exact: bool,
    pub hindsight_curve: Vec<f64>,
    /// `(1-ε)·hindsight_curve[t] - Σ_{j<=t} payoff_j`.
    pub regret_curve: Vec<f64>,
}

impl RegretReport {
    pub fn from_hindsight(epsilon: f64, payoffs: Vec<f64>, h: Hindsight) -> Result<Self> {
        check_epsilon(epsilon)?;
        if payoffs.len() != h.curve.len() {
            return Err(Error::DimensionMismatch {
                expected: h.curve.len(),
                got: payoffs.len(),
            });
        }
        let mut earned = 0.0;
        let regret_curve = payoffs
            .iter()
            .zip(&h.curve)
            .map(|(p, best)| {
                earned += p;
                (1.0 - epsilon) * best - earned
            })
            .collect();
        Ok(Self {
            epsilon,
            per_round_payoffs: payoffs,
            hindsight_value: h.curve.last().copied().unwrap_or(0.0),
            hindsight_set: h.set,
            hindsight_exact: h.exact,
            hindsight_curve: h.curve,
            regret_curve,
        })
    }

    pub fn final_regret(&self) -> f64 {
        self.regret_curve.last().copied().unwrap_or(0.0)
    }

    /// `Regret(t) / t` for a one-based round `t`.
    pub fn average_regret(&self, t: usize) -> f64 {
        self.regret_curve[t - 1] / t as f64
    }

    /// CSV with columns `t, payoff, hindsight, regret`.
    pub fn write_curve_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "payoff", "hindsight", "regret"])?;
        for (t, ((p, h), r)) in self
            .per_round_payoffs
            .iter()
            .zip(&self.hindsight_curve)
            .zip(&self.regret_curve)
            .enumerate()
        {
            out.write_record([
                (t + 1).to_string(),
                p.to_string(),
                h.to_string(),
                r.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `Regret_{1-ε}(t)` for `t = 1..T` against the best single independent set.
pub fn regret_1_minus_eps(
    schedule: &OnlineSchedule,
    payoffs: &[f64],
    epsilon: f64,
    m: &dyn Matroid,
) -> Result<RegretReport> {
    RegretReport::from_hindsight(epsilon, payoffs.to_vec(), hindsight(schedule, m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::Modular;
    use crate::matroid::UniformMatroid;

    fn modular(w: &[f64]) -> Oracle {
        Oracle::new(Modular::new(w.to_vec()).unwrap())
    }

    #[test]
    fn playing_the_optimum_gives_minus_eps_share() {
        let f = modular(&[0.1, 0.4, 0.3]);
        let m = UniformMatroid::new(3, 2);
        let s = OnlineSchedule::stationary(std::slice::from_ref(&f), 5).unwrap();
        let r = regret_1_minus_eps(&s, &[0.7; 5], 0.1, &m).unwrap();
        assert_eq!(r.hindsight_set.to_vec(), vec![1, 2]);
        assert!((r.hindsight_value - 3.5).abs() < 1e-12);
        assert!((r.final_regret() + 0.1 * 3.5).abs() < 1e-12);
    }

    #[test]
    fn zero_functions_zero_regret() {
        let f = modular(&[0.0, 0.0]);
        let s = OnlineSchedule::stationary(&[f.clone(), f], 4).unwrap();
        let r = regret_1_minus_eps(&s, &[0.0; 4], 0.3, &UniformMatroid::new(2, 1)).unwrap();
        assert!(r.regret_curve.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn curve_tracks_prefix_optimum() {
        let a = modular(&[0.5, 0.0]);
        let b = modular(&[0.0, 0.2]);
        let s = OnlineSchedule::switching(&[a], &[b], 4, &[1]).unwrap();
        let h = hindsight(&s, &UniformMatroid::new(2, 1)).unwrap();
        let want = [0.5, 0.5, 0.5, 0.6];
        assert!(h.curve.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12));
        assert_eq!(h.set.to_vec(), vec![1]);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let f = modular(&[0.5]);
        let s = OnlineSchedule::stationary(&[f], 2).unwrap();
        let r = regret_1_minus_eps(&s, &[0.25, 0.5], 0.5, &UniformMatroid::new(1, 1)).unwrap();
        let mut buf = Vec::new();
        r.write_curve_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("t,payoff,hindsight,regret"));
    }
}
