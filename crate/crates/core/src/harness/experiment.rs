use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{total_calls, FacilityLocation, GroundSet, Oracle, PerturbedFamily};
use crate::instance::{check_epsilon, Constraint, RobustInstance};
use crate::matroid::PartitionMatroid;
use crate::offline::{ell_matroid, robust_offline_solve, GammaSearch};

/// Highest rating of the synthetic generator.
pub const MAX_RATING: f64 = 5.0;

/// Parameters of the movie-recommendation experiment on synthetic ratings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    /// Movies.
    pub n: usize,
    pub num_users: usize,
    /// Perturbed objectives.
    pub k: usize,
    /// Parts of the partition.
    pub q: usize,
    /// Budget per part.
    pub b: usize,
    /// `|Λ_i|`.
    pub lambda_size: usize,
    /// Weight of the perturbation term; `None` means `1/n`.
    pub noise_scale: Option<f64>,
    /// Fraction of user-movie pairs carrying a rating.
    pub sparsity: f64,
    /// Latent genres in the rating model.
    pub genres: usize,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub gamma_search: GammaSearch,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::desk_scale()
    }
}

impl ExperimentConfig {
    /// Small enough to finish in seconds.
    pub fn desk_scale() -> Self {
        Self {
            n: 200,
            num_users: 200,
            k: 5,
            q: 5,
            b: 3,
            lambda_size: 20,
            noise_scale: None,
            sparsity: 0.05,
            genres: 12,
            epsilon: 0.01,
            trials: 20,
            seed: 0,
            gamma_search: GammaSearch::Binary,
        }
    }

    /// The MovieLens-sized setting: 1000 movies and users, `k = 20`, `q = 10`,
    /// `b = 5`, `|Λ_i| = 100`, `1 - ε = 0.99`, 20 trials.
    pub fn movielens_scale() -> Self {
        Self {
            n: 1000,
            num_users: 1000,
            k: 20,
            q: 10,
            b: 5,
            lambda_size: 100,
            ..Self::desk_scale()
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_epsilon(self.epsilon)?;
        let positive = [
            ("n", self.n),
            ("num_users", self.num_users),
            ("k", self.k),
            ("q", self.q),
            ("genres", self.genres),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::param(format!("{name} must be positive")));
        }
        if self.q > self.n {
            return Err(Error::param(format!(
                "{} parts cannot cover {} movies",
                self.q, self.n
            )));
        }
        if self.q * self.b > self.n {
            return Err(Error::param(format!(
                "q·b = {} exceeds n = {}",
                self.q * self.b,
                self.n
            )));
        }
        if self.lambda_size > self.n {
            return Err(Error::param(format!(
                "lambda_size {} exceeds n = {}",
                self.lambda_size, self.n
            )));
        }
        if !(0.0..=1.0).contains(&self.sparsity) {
            return Err(Error::param(format!(
                "sparsity {} must lie in [0, 1]",
                self.sparsity
            )));
        }
        if let Some(s) = self.noise_scale {
            if !(s.is_finite() && s >= 0.0) {
                return Err(Error::param(format!(
                    "noise scale {s} must be non-negative"
                )));
            }
        }
        Ok(())
    }

    pub fn ell(&self) -> usize {
        ell_matroid(self.k, self.epsilon)
    }

    pub fn noise(&self) -> f64 {
        self.noise_scale.unwrap_or(1.0 / self.n as f64)
    }
}

/// Users-by-movies ratings in `{0, .., 5}`. Every movie has a genre, every user
/// one to three favourite genres; each pair is rated with probability
/// `sparsity`, with ratings 3 to 5 inside a favourite genre and 1 to 3 outside.
pub fn generate_synthetic_ratings(cfg: &ExperimentConfig, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let genres = cfg.genres.max(1);
    let genre_of: Vec<usize> = (0..cfg.n).map(|_| rng.gen_range(0..genres)).collect();
    (0..cfg.num_users)
        .map(|_| {
            let count = rng.gen_range(1..=3.min(genres));
            let all: Vec<usize> = (0..genres).collect();
            let favourites: Vec<usize> = all.choose_multiple(&mut rng, count).copied().collect();
            genre_of
                .iter()
                .map(|g| {
                    if !rng.gen_bool(cfg.sparsity) {
                        return 0.0;
                    }
                    let (lo, hi) = if favourites.contains(g) {
                        (3, 5)
                    } else {
                        (1, 3)
                    };
                    rng.gen_range(lo..=hi) as f64
                })
                .collect()
        })
        .collect()
}

/// Random composition of `0..n` into `q` non-empty parts.
fn random_partition(n: usize, q: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut cuts: Vec<usize> = (1..n)
        .collect::<Vec<_>>()
        .choose_multiple(rng, q - 1)
        .copied()
        .collect();
    cuts.sort_unstable();
    cuts.push(n);
    let mut parts = Vec::with_capacity(q);
    let mut start = 0;
    for c in cuts {
        let mut part = order[start..c].to_vec();
        part.sort_unstable();
        parts.push(part);
        start = c;
    }
    parts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub trial: usize,
    pub seed: u64,
    pub wall_time_s: f64,
    pub oracle_calls: u64,
    pub part_sizes: Vec<usize>,
    /// `|S ∩ P_j|` for the returned union.
    pub per_part_sizes: Vec<usize>,
    pub union_size: usize,
    pub min_objective_value: f64,
    pub gamma: Option<f64>,
    pub ell: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    pub fn of(xs: &[f64]) -> Self {
        if xs.is_empty() {
            return Self {
                mean: 0.0,
                std: 0.0,
            };
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            std: var.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub trials: usize,
    pub ell: usize,
    /// `b·ℓ`, the most a part can receive.
    pub per_part_bound: usize,
    pub max_per_part: usize,
    /// Mean over parts, then over trials.
    pub avg_per_part: MeanStd,
    pub union_size: MeanStd,
    pub wall_time_s: MeanStd,
    pub oracle_calls: MeanStd,
    pub min_objective_value: MeanStd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub records: Vec<MetricsRecord>,
    pub summary: ExperimentSummary,
}

impl ExperimentResult {
    /// Copy with every wall-time field zeroed, for determinism checks.
    pub fn without_timing(&self) -> Self {
        let mut out = self.clone();
        for r in &mut out.records {
            r.wall_time_s = 0.0;
        }
        out.summary.wall_time_s = MeanStd {
            mean: 0.0,
            std: 0.0,
        };
        out
    }
}

fn trial_seed(seed: u64, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    rng.gen()
}

/// Runs `cfg.trials` independent partition compositions of the same perturbed
/// facility-location family and solves each with the robust reduction.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let ratings = generate_synthetic_ratings(cfg, cfg.seed);
    let base = Oracle::new(FacilityLocation::new(ratings, MAX_RATING)?);
    let family = PerturbedFamily::generate(
        base,
        cfg.k,
        cfg.lambda_size,
        cfg.noise(),
        trial_seed(cfg.seed, 0),
    )?;
    let mut records = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_trial(cfg, &family, trial))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| r.trial);
    let summary = summarize(cfg, &records);
    Ok(ExperimentResult {
        config: cfg.clone(),
        records,
        summary,
    })
}

fn run_trial(
    cfg: &ExperimentConfig,
    family: &PerturbedFamily,
    trial: usize,
) -> Result<MetricsRecord> {
    let seed = trial_seed(cfg.seed, trial + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts = random_partition(cfg.n, cfg.q, &mut rng);
    let m = PartitionMatroid::new(parts.clone(), vec![cfg.b; cfg.q])?;
    let objectives = family.members();
    let instance = RobustInstance::new(
        GroundSet::new(cfg.n)?,
        objectives.clone(),
        Constraint::Matroid(std::sync::Arc::new(m.clone())),
        cfg.epsilon,
    )?;
    let start = Instant::now();
    let before = total_calls(&objectives);
    let sol = robust_offline_solve(&instance, cfg.gamma_search)?;
    let wall = start.elapsed().as_secs_f64();
    Ok(MetricsRecord {
        trial,
        seed,
        wall_time_s: wall,
        oracle_calls: total_calls(&objectives) - before,
        part_sizes: parts.iter().map(Vec::len).collect(),
        per_part_sizes: m.counts(&sol.union),
        union_size: sol.union.len(),
        min_objective_value: sol.min_value(),
        gamma: sol.gamma,
        ell: sol.ell,
    })
}

fn summarize(cfg: &ExperimentConfig, records: &[MetricsRecord]) -> ExperimentSummary {
    let col =
        |f: &dyn Fn(&MetricsRecord) -> f64| MeanStd::of(&records.iter().map(f).collect::<Vec<_>>());
    ExperimentSummary {
        trials: records.len(),
        ell: cfg.ell(),
        per_part_bound: cfg.b * cfg.ell(),
        max_per_part: records
            .iter()
            .flat_map(|r| r.per_part_sizes.iter().copied())
            .max()
            .unwrap_or(0),
        avg_per_part: col(&|r| {
            r.per_part_sizes.iter().sum::<usize>() as f64 / r.per_part_sizes.len() as f64
        }),
        union_size: col(&|r| r.union_size as f64),
        wall_time_s: col(&|r| r.wall_time_s),
        oracle_calls: col(&|r| r.oracle_calls as f64),
        min_objective_value: col(&|r| r.min_objective_value),
    }
}
