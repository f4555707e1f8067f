use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::Oracle;
use crate::instance::check_epsilon;
use crate::set::ElementSet;

/// Order in which `γ` candidates are tried.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaSearch {
    /// Largest first, stop at the first certified candidate.
    #[default]
    Descending,
    /// Bisection over the sorted candidate list.
    Binary,
}

impl std::str::FromStr for GammaSearch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "descending" => Ok(Self::Descending),
            "binary" => Ok(Self::Binary),
            other => Err(Error::param(format!("unknown gamma search '{other}'"))),
        }
    }
}

/// The grid `n·f_i(e)·(1-ε/2)^j`, `j = 0..=J` with `J = ⌈ln(1/n) / ln(1-ε/2)⌉`,
/// over all objectives `i` and elements `e`, sorted descending without repeats.
#[derive(Debug, Clone)]
pub struct GammaCandidates {
    values: Vec<f64>,
    exponent_max: usize,
}

pub fn gamma_candidates(objectives: &[Oracle], epsilon: f64) -> Result<GammaCandidates> {
    if objectives.is_empty() {
        return Err(Error::param("gamma candidates need at least one objective"));
    }
    check_epsilon(epsilon)?;
    let n = objectives[0].ground_size();
    let ratio = 1.0 - epsilon / 2.0;
    let exponent_max = ((1.0 / n as f64).ln() / ratio.ln() - 1e-9).ceil().max(0.0) as usize;
    let mut tops = Vec::new();
    for f in objectives {
        for e in 0..n {
            let v = f.eval(&ElementSet::singleton(e));
            if v > 0.0 {
                tops.push(n as f64 * v);
            }
        }
    }
    let mut values = Vec::with_capacity(tops.len() * (exponent_max + 1));
    for top in tops {
        let mut g = top;
        for _ in 0..=exponent_max {
            values.push(g);
            g *= ratio;
        }
    }
    values.sort_by(|a, b| b.total_cmp(a));
    values.dedup();
    Ok(GammaCandidates {
        values,
        exponent_max,
    })
}

impl GammaCandidates {
    /// Candidates, largest first. Empty means every singleton value is zero, so
    /// the optimum is zero and `γ = 0` is the only sensible level.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn exponent_max(&self) -> usize {
        self.exponent_max
    }

    /// Drops candidates above `limit`.
    pub fn prune_above(&mut self, limit: f64) {
        self.values.retain(|&g| g <= limit);
    }

    /// Runs `attempt` on candidates in the requested order and returns the
    /// accepted one. Under [`GammaSearch::Binary`], acceptance is assumed to hold
    /// for every candidate below the optimum, which is what the certification
    /// argument guarantees; the result is adjacent to a rejected candidate.
    pub fn search<T>(
        &self,
        order: GammaSearch,
        mut attempt: impl FnMut(f64) -> Result<Option<T>>,
    ) -> Result<Option<(f64, T)>> {
        match order {
            GammaSearch::Descending => {
                for &g in &self.values {
                    if let Some(t) = attempt(g)? {
                        return Ok(Some((g, t)));
                    }
                }
                Ok(None)
            }
            GammaSearch::Binary => {
                let Some(&last) = self.values.last() else {
                    return Ok(None);
                };
                let Some(mut best) = attempt(last)? else {
                    return Ok(None);
                };
                // values[hi] accepted; values[lo] rejected (lo = -1 is virtual).
                let mut lo: isize = -1;
                let mut hi = self.values.len() as isize - 1;
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    match attempt(self.values[mid as usize])? {
                        Some(t) => {
                            best = t;
                            hi = mid;
                        }
                        None => lo = mid,
                    }
                }
                Ok(Some((self.values[hi as usize], best)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::Modular;

    #[test]
    fn single_element_single_candidate() {
        let f = Oracle::new(Modular::new(vec![2.0]).unwrap());
        let c = gamma_candidates(&[f], 0.5).unwrap();
        assert_eq!(c.exponent_max(), 0);
        assert_eq!(c.values(), &[2.0]);
    }

    #[test]
    fn count_within_formula() {
        let f = Oracle::new(Modular::new(vec![1.0, 2.0, 3.0, 5.0]).unwrap());
        let g = Oracle::new(Modular::new(vec![0.5, 0.25, 3.0, 1.0]).unwrap());
        let eps = 0.3;
        let c = gamma_candidates(&[f, g], eps).unwrap();
        let per = ((4f64).ln() / -(1.0 - eps / 2.0f64).ln()).ceil() as usize + 1;
        assert!(c.values().len() <= 4 * 2 * per);
        assert!(c.values().windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn zero_singletons_give_sentinel() {
        let f = Oracle::new(Modular::new(vec![0.0, 0.0]).unwrap());
        assert!(gamma_candidates(&[f], 0.1).unwrap().is_zero());
    }

    #[test]
    fn binary_and_descending_find_threshold() {
        let f = Oracle::new(Modular::new(vec![1.0, 3.0, 7.0]).unwrap());
        let c = gamma_candidates(&[f], 0.2).unwrap();
        let accept = |g: f64| Ok(if g <= 4.0 { Some(g) } else { None });
        let (d, _) = c.search(GammaSearch::Descending, accept).unwrap().unwrap();
        let (b, _) = c.search(GammaSearch::Binary, accept).unwrap().unwrap();
        assert_eq!(d, b);
        assert!((4.0 * 0.9..=4.0).contains(&d));
    }
}
