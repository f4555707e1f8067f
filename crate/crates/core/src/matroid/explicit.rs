use rand::Rng;

use super::Matroid;
use crate::error::{Error, MatroidViolation, Result};
use crate::set::ElementSet;

/// Largest ground set an [`ExplicitMatroid`] accepts.
pub const EXPLICIT_LIMIT: usize = 12;

/// Matroid given by its full family of independent sets, stored as a `2^n`
/// membership table. The family is checked against the matroid axioms at
/// construction.
#[derive(Debug, Clone)]
pub struct ExplicitMatroid {
    n: usize,
    independent: Vec<bool>,
}

impl ExplicitMatroid {
    /// `sets` must list every independent set (the family must be downward closed).
    pub fn new(n: usize, sets: &[Vec<usize>]) -> Result<Self> {
        let independent = Self::table(n, sets)?;
        let m = Self { n, independent };
        m.validate().map_err(Error::NotAMatroid)?;
        Ok(m)
    }

    /// Downward closure of `maximal`, then validated.
    pub fn from_maximal(n: usize, maximal: &[Vec<usize>]) -> Result<Self> {
        let mut independent = Self::table(n, maximal)?;
        for mask in (0..independent.len()).rev() {
            if independent[mask] {
                for e in 0..n {
                    if mask & (1 << e) != 0 {
                        independent[mask & !(1 << e)] = true;
                    }
                }
            }
        }
        let m = Self { n, independent };
        m.validate().map_err(Error::NotAMatroid)?;
        Ok(m)
    }

    /// Binary matroid of `n` random vectors in `GF(2)^dim`: a set is independent
    /// iff its vectors are linearly independent. Useful as a random general matroid.
    pub fn random_binary<R: Rng + ?Sized>(n: usize, dim: usize, rng: &mut R) -> Self {
        assert!(n <= EXPLICIT_LIMIT && dim < 32);
        let vectors: Vec<u32> = (0..n).map(|_| rng.gen_range(0..1u32 << dim)).collect();
        let independent = (0..1usize << n)
            .map(|mask| {
                let mut basis: Vec<u32> = Vec::new();
                for (e, &v) in vectors.iter().enumerate() {
                    if mask & (1 << e) == 0 {
                        continue;
                    }
                    let mut x = v;
                    for &b in &basis {
                        x = x.min(x ^ b);
                    }
                    if x == 0 {
                        return false;
                    }
                    basis.push(x);
                    basis.sort_unstable_by(|a, b| b.cmp(a));
                }
                true
            })
            .collect();
        Self { n, independent }
    }

    fn table(n: usize, sets: &[Vec<usize>]) -> Result<Vec<bool>> {
        if n > EXPLICIT_LIMIT {
            return Err(Error::SizeLimit {
                what: "explicit matroid",
                size: n,
                limit: EXPLICIT_LIMIT,
            });
        }
        let mut independent = vec![false; 1 << n];
        for s in sets {
            let mut mask = 0usize;
            for &e in s {
                if e >= n {
                    return Err(Error::NotAMatroid(MatroidViolation::ElementOutOfRange {
                        element: e,
                        n,
                    }));
                }
                mask |= 1 << e;
            }
            independent[mask] = true;
        }
        Ok(independent)
    }

    /// Checks non-emptiness, downward closure and the exchange axiom. Exchange is
    /// only tested for `|B| = |A| + 1`; the general form follows by restricting
    /// `B` to a subset of size `|A| + 1`.
    pub fn validate(&self) -> std::result::Result<(), MatroidViolation> {
        if !self.independent[0] {
            return Err(MatroidViolation::EmptyNotIndependent);
        }
        let n = self.n;
        for mask in 0..self.independent.len() {
            if !self.independent[mask] {
                continue;
            }
            for e in 0..n {
                if mask & (1 << e) != 0 && !self.independent[mask & !(1 << e)] {
                    return Err(MatroidViolation::NotDownwardClosed {
                        superset: ElementSet::from_mask(mask as u64),
                        subset: ElementSet::from_mask((mask & !(1 << e)) as u64),
                    });
                }
            }
        }
        let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for (mask, &ind) in self.independent.iter().enumerate() {
            if ind {
                by_size[mask.count_ones() as usize].push(mask);
            }
        }
        for size in 0..n {
            for &a in &by_size[size] {
                for &b in &by_size[size + 1] {
                    let extendable = (0..n)
                        .filter(|&e| b & (1 << e) != 0 && a & (1 << e) == 0)
                        .any(|e| self.independent[a | (1 << e)]);
                    if !extendable {
                        return Err(MatroidViolation::NoExchange {
                            small: ElementSet::from_mask(a as u64),
                            large: ElementSet::from_mask(b as u64),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Every independent set, in increasing mask order.
    pub fn family(&self) -> Vec<ElementSet> {
        (0..self.independent.len())
            .filter(|&m| self.independent[m])
            .map(|m| ElementSet::from_mask(m as u64))
            .collect()
    }
}

impl Matroid for ExplicitMatroid {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        match set.to_mask() {
            Some(m) if set.bound() <= self.n => self.independent[m as usize],
            _ => false,
        }
    }
}
