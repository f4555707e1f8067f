//! Online robust maximization: one follow-the-perturbed-leader instance per
//! grid point of a discretized continuous greedy, driven by soft-min gradients.

mod fpl;
mod regret;
mod schedule;

use std::collections::HashSet;
use std::io::Write;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use fpl::{argmax_linear, fpl_explicit_regret, FplInstance, FplRegret};
pub use regret::{
    hindsight, regret_1_minus_eps, Hindsight, RegretReport, HINDSIGHT_EXHAUSTIVE_LIMIT,
};
pub use schedule::OnlineSchedule;

use crate::error::{Error, Result};
use crate::functions::Oracle;
use crate::instance::check_epsilon;
use crate::matroid::{rank, Matroid, UnionMatroid};
use crate::multilinear::{EstimatorConfig, Evaluator, FractionalPoint};
use crate::offline::ell_online;
use crate::rounding::{decompose, swap_round};
use crate::set::ElementSet;
use crate::softmin::softmin_point;

/// Literal parameters are only tractable on tiny runs.
pub const LITERAL_PARAMS_LIMIT: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnlineConfig {
    pub epsilon: f64,
    /// FPL learning rate; defaults to `min(1, sqrt(D / (L·A·T)))` with `L = A = n`
    /// and `D = 2·rank(M)`.
    pub eta: Option<f64>,
    /// Soft-min sharpness; defaults to `4·ln(max(k, 2))·max(n, T)`.
    pub alpha: Option<f64>,
    /// Grid step; defaults to `ℓ/64`.
    pub delta: Option<f64>,
    /// Use `α = n²T²` and `δ = n^{-6}T^{-3}` (only for `n, T <= 3`).
    pub literal_params: bool,
    /// Rounding draws averaged into the reported payoff.
    pub draws: usize,
    pub exact: Option<bool>,
    pub estimator: EstimatorConfig,
    pub seed: u64,
    /// Fresh perturbation every round instead of a single draw.
    pub adaptive: bool,
}

impl Default for OnlineConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.5,
            eta: None,
            alpha: None,
            delta: None,
            literal_params: false,
            draws: 32,
            exact: None,
            estimator: EstimatorConfig::default(),
            seed: 0,
            adaptive: false,
        }
    }
}

/// Parameters after defaults are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnlineParams {
    pub n: usize,
    pub k: usize,
    pub horizon: usize,
    pub ell: usize,
    pub delta: f64,
    pub steps: usize,
    pub alpha: f64,
    pub eta: f64,
    pub rank: usize,
}

impl OnlineConfig {
    pub fn resolve(&self, schedule: &OnlineSchedule, m: &dyn Matroid) -> Result<OnlineParams> {
        check_epsilon(self.epsilon)?;
        if self.draws == 0 {
            return Err(Error::param("need at least one rounding draw per round"));
        }
        let (n, k, horizon) = (schedule.n(), schedule.k(), schedule.horizon());
        if m.ground_size() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.ground_size(),
            });
        }
        let ell = ell_online(self.epsilon);
        let r = rank(m, &ElementSet::full(n));
        let (nf, tf) = (n as f64, horizon as f64);
        let (alpha, delta) = if self.literal_params {
            if n > LITERAL_PARAMS_LIMIT || horizon > LITERAL_PARAMS_LIMIT {
                return Err(Error::SizeLimit {
                    what: "literal online parameters",
                    size: n.max(horizon),
                    limit: LITERAL_PARAMS_LIMIT,
                });
            }
            (nf * nf * tf * tf, 1.0 / (nf.powi(6) * tf.powi(3)))
        } else {
            let alpha = self
                .alpha
                .unwrap_or_else(|| 4.0 * (k.max(2) as f64).ln() * nf.max(tf));
            (alpha, self.delta.unwrap_or(ell as f64 / 64.0))
        };
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::param(format!(
                "soft-min sharpness {alpha} must be positive"
            )));
        }
        if !(delta > 0.0 && delta <= ell as f64) {
            return Err(Error::param(format!(
                "grid step {delta} must lie in (0, ell]"
            )));
        }
        let steps_f = (ell as f64 / delta).round();
        if (steps_f * delta - ell as f64).abs() > 1e-9 * ell as f64 {
            return Err(Error::param(format!(
                "grid step {delta} does not divide ell = {ell}"
            )));
        }
        let eta = match self.eta {
            Some(e) => e,
            None => (2.0 * r.max(1) as f64 / (nf * nf * tf)).sqrt().min(1.0),
        };
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::param(format!(
                "learning rate {eta} must be positive"
            )));
        }
        Ok(OnlineParams {
            n,
            k,
            horizon,
            ell,
            delta,
            steps: steps_f as usize,
            alpha,
            eta,
            rank: r,
        })
    }
}

/// Per-round diagnostics of the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridStats {
    /// `max_τ ‖ΔH^t(y^t_{τ-δ})‖₁`.
    pub reward_l1_max: f64,
    /// `max_τ |z^t_τ · ΔH^t(y^t_{τ-δ})|`.
    pub reward_dot_max: f64,
    /// `Σ_e y^t_{ℓ,e}`.
    pub endpoint_mass: f64,
    /// Atoms in the decomposition that was rounded.
    pub atoms: usize,
}

/// One line of the transcript.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub t: usize,
    #[serde(rename = "S_t")]
    pub set: ElementSet,
    pub witness: Vec<ElementSet>,
    /// `min_i` of the averaged per-objective payoffs.
    pub payoff_min: f64,
    /// `Ê[f_i^t(S)]` over the rounding draws.
    pub per_objective_payoffs: Vec<f64>,
    /// `f_i^t(S_t)` of the played (first) draw.
    pub played_values: Vec<f64>,
    pub grid_stats: GridStats,
}

/// Constants of the learning problem as observed during the run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasuredConstants {
    pub l: f64,
    pub a: f64,
    /// `max |z Δ z'|` over the distinct FPL decisions.
    pub d: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OnlineRun {
    pub params: OnlineParams,
    pub rounds: Vec<RoundRecord>,
    pub report: RegretReport,
    pub measured: MeasuredConstants,
}

impl OnlineRun {
    pub fn played_sets(&self) -> Vec<ElementSet> {
        self.rounds.iter().map(|r| r.set.clone()).collect()
    }

    pub fn write_transcript_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for r in &self.rounds {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn round_seed(seed: u64, t: usize, r: usize) -> u64 {
    let mut x = seed
        ^ (t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (r as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    // splitmix64 finalizer
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn evaluator_for(round: &[Oracle], cfg: &OnlineConfig, t: usize) -> Result<Evaluator> {
    let est = EstimatorConfig {
        seed: round_seed(cfg.estimator.seed, t, usize::MAX),
        ..cfg.estimator
    };
    match cfg.exact {
        Some(true) => Evaluator::exact(round),
        Some(false) => Ok(Evaluator::sampled(round, est)),
        None => Evaluator::auto(round, est),
    }
}

/// Runs the online algorithm over the whole schedule. Each round ascends from
/// `y = 0` along FPL decisions `z_τ` via `y_τ = y_{τ-δ} + δ(1 - y_{τ-δ})∘z_τ`,
/// plays a swap-rounded set of `y_ℓ` in `M_ℓ`, then feeds `ΔH^t(y^t_{τ-δ})` to the
/// FPL instance of each grid point.
pub fn online_softmin_run(
    schedule: &OnlineSchedule,
    m: Arc<dyn Matroid>,
    cfg: &OnlineConfig,
) -> Result<OnlineRun> {
    let p = cfg.resolve(schedule, m.as_ref())?;
    let n = p.n;
    let u = UnionMatroid::new(m.clone(), p.ell)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let shared = FplInstance::new(n, p.eta, &mut rng)?;
    // Every grid point shares the perturbation; only the accumulators differ.
    let mut fpl: Vec<FplInstance> = vec![shared; p.steps];
    let mut records = Vec::with_capacity(p.horizon);
    let mut decisions: HashSet<ElementSet> = HashSet::new();
    let mut measured = MeasuredConstants {
        l: 0.0,
        a: 0.0,
        d: 0.0,
    };
    let mut cached: Option<(Vec<Oracle>, Evaluator)> = None;

    for t in 0..p.horizon {
        if cfg.adaptive && t > 0 {
            fpl[0].resample(&mut rng);
            let q = fpl[0].q.clone();
            for inst in &mut fpl[1..] {
                inst.q.clone_from(&q);
            }
        }
        let mut ys: Vec<Vec<f64>> = Vec::with_capacity(p.steps + 1);
        let mut zs: Vec<ElementSet> = Vec::with_capacity(p.steps);
        ys.push(vec![0.0; n]);
        for inst in &fpl {
            let z = inst.decide_matroid(m.as_ref());
            let prev = ys.last().expect("grid starts at zero");
            let mut next = prev.clone();
            for e in z.iter() {
                next[e] = (prev[e] + p.delta * (1.0 - prev[e])).min(1.0);
            }
            ys.push(next);
            zs.push(z);
        }
        let endpoint = FractionalPoint::new(ys[p.steps].clone())?;
        let d = decompose(&endpoint, &u)?;

        let round = schedule.round(t);
        let mut sums = vec![0.0; p.k];
        let mut played = None;
        for r in 0..cfg.draws {
            let drawn = swap_round(&d, &u, round_seed(cfg.seed, t, r))?;
            let values: Vec<f64> = round.iter().map(|f| f.eval(&drawn.set)).collect();
            for (s, v) in sums.iter_mut().zip(&values) {
                *s += v;
            }
            if played.is_none() {
                played = Some((drawn, values));
            }
        }
        let (drawn, played_values) = played.expect("at least one draw");
        let per_objective_payoffs: Vec<f64> = sums.iter().map(|s| s / cfg.draws as f64).collect();
        let payoff_min = per_objective_payoffs
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);

        let reuse = cached.as_ref().is_some_and(|(objs, _)| {
            objs.len() == round.len() && objs.iter().zip(round).all(|(a, b)| a.same_as(b))
        });
        if !reuse {
            cached = Some((round.to_vec(), evaluator_for(round, cfg, t)?));
        }
        let eval = &cached.as_ref().expect("evaluator cached").1;
        let mut stats = GridStats {
            reward_l1_max: 0.0,
            reward_dot_max: 0.0,
            endpoint_mass: ys[p.steps].iter().sum(),
            atoms: d.atoms().len(),
        };
        for (s, inst) in fpl.iter_mut().enumerate() {
            let y = FractionalPoint::new(ys[s].clone())?;
            let reward = softmin_point(eval, &y, p.alpha)?.delta;
            let l1: f64 = reward.iter().map(|x| x.abs()).sum();
            let dot: f64 = zs[s].iter().map(|e| reward[e]).sum();
            stats.reward_l1_max = stats.reward_l1_max.max(l1);
            stats.reward_dot_max = stats.reward_dot_max.max(dot.abs());
            inst.observe(&reward)?;
        }
        measured.a = measured.a.max(stats.reward_l1_max);
        measured.l = measured.l.max(stats.reward_dot_max);
        decisions.extend(zs);

        records.push(RoundRecord {
            t: t + 1,
            set: drawn.set,
            witness: drawn.witness,
            payoff_min,
            per_objective_payoffs,
            played_values,
            grid_stats: stats,
        });
    }

    let distinct: Vec<&ElementSet> = decisions.iter().collect();
    for (i, a) in distinct.iter().enumerate() {
        for b in &distinct[i + 1..] {
            let sym = a.difference(b).len() + b.difference(a).len();
            measured.d = measured.d.max(sym as f64);
        }
    }
    let payoffs: Vec<f64> = records.iter().map(|r| r.payoff_min).collect();
    let report = regret_1_minus_eps(schedule, &payoffs, cfg.epsilon, m.as_ref())?;
    Ok(OnlineRun {
        params: p,
        rounds: records,
        report,
        measured,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{Coverage, Scaled};
    use crate::matroid::UniformMatroid;

    fn normalized_coverage(n: usize, seed: u64) -> Oracle {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Coverage::random(n, 8, 0.35, &mut rng);
        let total = c.total_weight();
        Oracle::new(Scaled::new(Oracle::new(c), 1.0 / total).unwrap())
    }

    #[test]
    fn single_round_plays_valid_union() {
        let objs = [normalized_coverage(6, 1), normalized_coverage(6, 2)];
        let s = OnlineSchedule::stationary(&objs, 1).unwrap();
        let m: Arc<dyn Matroid> = Arc::new(UniformMatroid::new(6, 2));
        let cfg = OnlineConfig {
            epsilon: 0.2,
            draws: 4,
            ..OnlineConfig::default()
        };
        let run = online_softmin_run(&s, m.clone(), &cfg).unwrap();
        assert_eq!(run.params.ell, 2);
        let r = &run.rounds[0];
        assert!(r.witness.len() <= 2);
        assert!(r.witness.iter().all(|l| m.is_independent(l)));
        let mut union = ElementSet::new();
        for l in &r.witness {
            union.union_with(l);
        }
        assert_eq!(union, r.set);
    }

    #[test]
    fn replay_is_deterministic() {
        let objs = [normalized_coverage(5, 3), normalized_coverage(5, 4)];
        let s = OnlineSchedule::stationary(&objs, 6).unwrap();
        let m: Arc<dyn Matroid> = Arc::new(UniformMatroid::new(5, 2));
        let cfg = OnlineConfig {
            draws: 3,
            seed: 11,
            ..OnlineConfig::default()
        };
        let a = online_softmin_run(&s, m.clone(), &cfg).unwrap();
        let b = online_softmin_run(&s, m, &cfg).unwrap();
        assert_eq!(a.rounds, b.rounds);
        assert_eq!(a.report, b.report);
    }

    #[test]
    fn grid_rewards_respect_bounds() {
        let objs = [normalized_coverage(6, 5), normalized_coverage(6, 6)];
        let s = OnlineSchedule::stationary(&objs, 5).unwrap();
        let run = online_softmin_run(
            &s,
            Arc::new(UniformMatroid::new(6, 3)),
            &OnlineConfig::default(),
        )
        .unwrap();
        for r in &run.rounds {
            assert!(r.grid_stats.reward_l1_max <= 6.0 + 1e-9);
            assert!(r.grid_stats.reward_dot_max <= 6.0 + 1e-9);
        }
    }

    #[test]
    fn literal_params_limited_to_tiny_runs() {
        let objs = [normalized_coverage(4, 1)];
        let s = OnlineSchedule::stationary(&objs, 2).unwrap();
        let cfg = OnlineConfig {
            literal_params: true,
            ..OnlineConfig::default()
        };
        assert!(matches!(
            online_softmin_run(&s, Arc::new(UniformMatroid::new(4, 1)), &cfg),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn literal_params_smoke() {
        let objs = [normalized_coverage(2, 1), normalized_coverage(2, 2)];
        let s = OnlineSchedule::stationary(&objs, 2).unwrap();
        let cfg = OnlineConfig {
            literal_params: true,
            draws: 2,
            ..OnlineConfig::default()
        };
        let run = online_softmin_run(&s, Arc::new(UniformMatroid::new(2, 1)), &cfg).unwrap();
        assert_eq!(run.params.steps, 64 * 8);
        assert_eq!(run.params.alpha, 16.0);
    }
}
