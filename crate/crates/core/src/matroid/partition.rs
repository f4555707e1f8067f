use serde::{Deserialize, Serialize};

use super::Matroid;
use crate::error::{Error, Result};
use crate::set::ElementSet;

/// `S` independent iff `|S| <= b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformMatroid {
    n: usize,
    budget: usize,
}

impl UniformMatroid {
    pub fn new(n: usize, budget: usize) -> Self {
        Self { n, budget }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }
}

impl Matroid for UniformMatroid {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        set.len() <= self.budget && set.bound() <= self.n
    }

    fn as_partition(&self) -> Option<PartitionMatroid> {
        Some(
            PartitionMatroid::new(vec![(0..self.n).collect()], vec![self.budget])
                .expect("single part covers the ground set"),
        )
    }
}

/// JSON form of a partition matroid: `{parts: [[indices]...], budgets: [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSpec {
    pub parts: Vec<Vec<usize>>,
    pub budgets: Vec<usize>,
}

/// Parts `P_1..P_q` covering `V`; `S` independent iff `|S ∩ P_j| <= b_j` for all `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMatroid {
    parts: Vec<Vec<usize>>,
    budgets: Vec<usize>,
    part_of: Vec<usize>,
}

impl PartitionMatroid {
    /// The parts must be disjoint and cover `{0, .., n-1}` where `n` is the total
    /// number of listed elements.
    pub fn new(parts: Vec<Vec<usize>>, budgets: Vec<usize>) -> Result<Self> {
        if parts.len() != budgets.len() {
            return Err(Error::DimensionMismatch {
                expected: parts.len(),
                got: budgets.len(),
            });
        }
        let n: usize = parts.iter().map(Vec::len).sum();
        if n == 0 {
            return Err(Error::param(
                "partition matroid needs a non-empty ground set",
            ));
        }
        let mut part_of = vec![usize::MAX; n];
        for (j, part) in parts.iter().enumerate() {
            for &e in part {
                if e >= n {
                    return Err(Error::param(format!(
                        "partition element {e} outside 0..{n}: parts must cover the ground set"
                    )));
                }
                if part_of[e] != usize::MAX {
                    return Err(Error::param(format!("element {e} appears in two parts")));
                }
                part_of[e] = j;
            }
        }
        let mut parts = parts;
        for p in &mut parts {
            p.sort_unstable();
        }
        Ok(Self {
            parts,
            budgets,
            part_of,
        })
    }

    pub fn from_spec(spec: PartitionSpec) -> Result<Self> {
        Self::new(spec.parts, spec.budgets)
    }

    pub fn to_spec(&self) -> PartitionSpec {
        PartitionSpec {
            parts: self.parts.clone(),
            budgets: self.budgets.clone(),
        }
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn budgets(&self) -> &[usize] {
        &self.budgets
    }

    pub fn part_of(&self, e: usize) -> usize {
        self.part_of[e]
    }

    /// Rank of the whole ground set.
    pub fn full_rank(&self) -> usize {
        self.parts
            .iter()
            .zip(&self.budgets)
            .map(|(p, &b)| p.len().min(b))
            .sum()
    }

    /// `|S ∩ P_j|` for every part.
    pub fn counts(&self, set: &ElementSet) -> Vec<usize> {
        let mut c = vec![0; self.parts.len()];
        for e in set {
            c[self.part_of[e]] += 1;
        }
        c
    }

    /// Same parts with every budget multiplied by `factor`.
    pub fn scaled(&self, factor: usize) -> Self {
        Self {
            parts: self.parts.clone(),
            budgets: self.budgets.iter().map(|b| b * factor).collect(),
            part_of: self.part_of.clone(),
        }
    }
}

impl Matroid for PartitionMatroid {
    fn ground_size(&self) -> usize {
        self.part_of.len()
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        if set.bound() > self.part_of.len() {
            return false;
        }
        let mut c = vec![0; self.parts.len()];
        for e in set {
            let j = self.part_of[e];
            c[j] += 1;
            if c[j] > self.budgets[j] {
                return false;
            }
        }
        true
    }

    fn as_partition(&self) -> Option<PartitionMatroid> {
        Some(self.clone())
    }
}
