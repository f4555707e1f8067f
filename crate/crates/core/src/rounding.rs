//! Rounding a fractional point of `P(M_ℓ)` to a set that is a union of at most
//! `ℓ` independent sets: convex decomposition followed by randomized swap
//! rounding in the union matroid.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::Oracle;
use crate::matroid::{
    independent_sets, rank, Matroid, PartitionMatroid, UnionMatroid, EXPLICIT_LIMIT,
};
use crate::multilinear::FractionalPoint;
use crate::set::ElementSet;

const TOL: f64 = 1e-9;

/// `point = sum_j λ_j 1_{I_j}` with `λ_j > 0` summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexDecomposition {
    n: usize,
    atoms: Vec<(f64, ElementSet)>,
}

impl ConvexDecomposition {
    /// Drops non-positive weights and merges repeated sets. Weights must sum to one.
    pub fn new(n: usize, atoms: Vec<(f64, ElementSet)>) -> Result<Self> {
        let mut merged: Vec<(f64, ElementSet)> = Vec::with_capacity(atoms.len());
        for (w, s) in atoms {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Rounding(format!(
                    "atom weight {w} is not a nonnegative number"
                )));
            }
            if s.bound() > n {
                return Err(Error::ElementOutOfRange {
                    element: s.bound() - 1,
                    n,
                });
            }
            if w == 0.0 {
                continue;
            }
            match merged.iter_mut().find(|(_, t)| *t == s) {
                Some(slot) => slot.0 += w,
                None => merged.push((w, s)),
            }
        }
        let total: f64 = merged.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > TOL {
            return Err(Error::Rounding(format!(
                "atom weights sum to {total}, not 1"
            )));
        }
        Ok(Self { n, atoms: merged })
    }

    pub fn atoms(&self) -> &[(f64, ElementSet)] {
        &self.atoms
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    /// `sum_j λ_j 1_{I_j}`.
    pub fn point(&self) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for (w, s) in &self.atoms {
            for e in s {
                y[e] += w;
            }
        }
        y
    }

    /// Largest coordinate difference between the recomposed point and `y`.
    pub fn recomposition_error(&self, y: &FractionalPoint) -> f64 {
        self.point()
            .iter()
            .zip(y.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Checks every atom against `m`.
    pub fn check_independent(&self, m: &dyn Matroid) -> Result<()> {
        match self.atoms.iter().find(|(_, s)| !m.is_independent(s)) {
            Some((_, s)) => Err(Error::Rounding(format!("atom {s} is not independent"))),
            None => Ok(()),
        }
    }
}

/// Exhaustive membership test for `P(M_ℓ)`: `y <= 1` and `y(A) <= ℓ·r(A)` for
/// every `A`. Returns the first violated inequality.
pub fn check_membership(y: &FractionalPoint, u: &UnionMatroid) -> Result<()> {
    let n = y.len();
    if n != u.ground_size() {
        return Err(Error::DimensionMismatch {
            expected: u.ground_size(),
            got: n,
        });
    }
    for e in 0..n {
        if y.get(e) > 1.0 + TOL {
            let a = ElementSet::singleton(e);
            return Err(Error::OutsidePolytope {
                set: a.clone(),
                subset: ElementSet::new(),
                lhs: y.get(e),
                rhs: 1.0,
            });
        }
    }
    if n > crate::multilinear::EXACT_LIMIT {
        return Err(Error::SizeLimit {
            what: "polytope membership check",
            size: n,
            limit: crate::multilinear::EXACT_LIMIT,
        });
    }
    for mask in 1..1u64 << n {
        let a = ElementSet::from_mask(mask);
        let lhs: f64 = a.iter().map(|e| y.get(e)).sum();
        let rhs = (u.ell() * rank(u.base().as_ref(), &a)) as f64;
        if lhs > rhs + TOL {
            return Err(Error::OutsidePolytope {
                set: a.clone(),
                subset: a,
                lhs,
                rhs,
            });
        }
    }
    Ok(())
}

/// Writes `y ∈ P(M_ℓ)` as a convex combination of `M_ℓ`-independent sets.
///
/// Partition and uniform bases use systematic sampling: the elements of each part
/// are laid end to end on a line, segment lengths `y_e`, and a threshold `θ ∈ [0,1)`
/// selects the elements whose segment contains a point of `θ + Z`. Each part then
/// contributes at most `⌈y(P_j)⌉ <= ℓ·b_j` elements, every element is chosen for a
/// `y_e` fraction of thresholds, and the breakpoints give at most `n + 1` atoms.
///
/// Other matroids (ground sets up to [`EXPLICIT_LIMIT`]) solve a feasibility LP
/// over all independent sets of `M_ℓ`; a basic solution has at most `n + 1` atoms.
pub fn decompose(y: &FractionalPoint, u: &UnionMatroid) -> Result<ConvexDecomposition> {
    if y.len() != u.ground_size() {
        return Err(Error::DimensionMismatch {
            expected: u.ground_size(),
            got: y.len(),
        });
    }
    match u.base().as_partition() {
        Some(p) => systematic_decomposition(y, &p, u.ell()),
        None => lp_decomposition(y, u),
    }
}

fn systematic_decomposition(
    y: &FractionalPoint,
    p: &PartitionMatroid,
    ell: usize,
) -> Result<ConvexDecomposition> {
    let n = y.len();
    let mut ys = y.as_slice().to_vec();
    // Segment start of every element on its part's line.
    let mut start = vec![0.0; n];
    for (j, part) in p.parts().iter().enumerate() {
        let cap = (ell * p.budgets()[j]) as f64;
        let total: f64 = part.iter().map(|&e| ys[e]).sum();
        if total > cap + TOL {
            let set: ElementSet = part.iter().copied().collect();
            return Err(Error::OutsidePolytope {
                set: set.clone(),
                subset: set,
                lhs: total,
                rhs: cap,
            });
        }
        // Absorb rounding drift so no atom overfills the part.
        if total > cap {
            for &e in part {
                ys[e] *= cap / total;
            }
        }
        let mut pos = 0.0;
        for &e in part {
            start[e] = pos;
            pos += ys[e];
        }
    }
    let frac = |x: f64| x - x.floor();
    let mut cuts: Vec<f64> = vec![0.0, 1.0];
    for e in 0..n {
        if ys[e] > 0.0 && ys[e] < 1.0 {
            cuts.push(frac(start[e]));
            cuts.push(frac(start[e] + ys[e]));
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let mut atoms = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        let width = w[1] - w[0];
        if width <= 0.0 {
            continue;
        }
        let theta = 0.5 * (w[0] + w[1]);
        let set: ElementSet = (0..n)
            .filter(|&e| ys[e] >= 1.0 || (ys[e] > 0.0 && frac(theta - start[e]) < ys[e]))
            .collect();
        atoms.push((width, set));
    }
    ConvexDecomposition::new(n, atoms)
}

fn lp_decomposition(y: &FractionalPoint, u: &UnionMatroid) -> Result<ConvexDecomposition> {
    let n = y.len();
    if n > EXPLICIT_LIMIT {
        return Err(Error::SizeLimit {
            what: "general-matroid decomposition",
            size: n,
            limit: EXPLICIT_LIMIT,
        });
    }
    let family = independent_sets(u);
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = family
        .iter()
        .map(|_| problem.add_var(0.0, (0.0, f64::INFINITY)))
        .collect();
    problem.add_constraint(
        vars.iter().map(|&v| (v, 1.0)).collect::<Vec<_>>(),
        ComparisonOp::Eq,
        1.0,
    );
    for e in 0..n {
        let terms: Vec<_> = family
            .iter()
            .zip(&vars)
            .filter(|(s, _)| s.contains(e))
            .map(|(_, &v)| (v, 1.0))
            .collect();
        problem.add_constraint(terms, ComparisonOp::Eq, y.get(e));
    }
    match problem.solve() {
        Ok(sol) => {
            let atoms: Vec<(f64, ElementSet)> = family
                .iter()
                .zip(&vars)
                .map(|(s, &v)| (sol[v].max(0.0), s.clone()))
                .filter(|(w, _)| *w > 1e-12)
                .collect();
            let total: f64 = atoms.iter().map(|(w, _)| w).sum();
            ConvexDecomposition::new(n, atoms.into_iter().map(|(w, s)| (w / total, s)).collect())
        }
        Err(_) => {
            check_membership(y, u)?;
            Err(Error::Rounding(
                "decomposition LP failed on a point inside the polytope".into(),
            ))
        }
    }
}

/// A rounded set with its split into at most `ℓ` base-independent layers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundedSet {
    pub set: ElementSet,
    pub witness: Vec<ElementSet>,
}

/// Bases of the padded matroid `M'` on `V` plus `r` dummy elements `n..n+r`:
/// `S` is independent iff `|S| <= r` and its real part is independent in `M_ℓ`.
/// Padding every atom with dummies turns them into bases of `M'`.
struct Padded<'a> {
    u: &'a UnionMatroid,
    n: usize,
    r: usize,
}

impl Padded<'_> {
    fn is_base(&self, s: &ElementSet) -> bool {
        s.len() == self.r && self.u.is_independent(&self.real(s))
    }

    fn real(&self, s: &ElementSet) -> ElementSet {
        s.iter().filter(|&e| e < self.n).collect()
    }

    fn pad(&self, s: &ElementSet) -> ElementSet {
        let mut out = s.clone();
        for d in 0..self.r - s.len() {
            out.insert(self.n + d);
        }
        out
    }

    /// Randomized merge of two bases; the result keeps each differing element
    /// with probability proportional to its side's weight.
    fn merge(
        &self,
        w1: f64,
        mut b1: ElementSet,
        w2: f64,
        mut b2: ElementSet,
        rng: &mut ChaCha8Rng,
    ) -> Result<ElementSet> {
        let keep_first = w1 / (w1 + w2);
        while b1 != b2 {
            let e1 = b1.difference(&b2).iter().next().expect("bases differ");
            let e2 = b2
                .difference(&b1)
                .iter()
                .find(|&e2| {
                    let c1 = b1.without(e1).with(e2);
                    let c2 = b2.without(e2).with(e1);
                    self.is_base(&c1) && self.is_base(&c2)
                })
                .ok_or_else(|| {
                    Error::Rounding(format!(
                        "no exchange partner for {e1} between {b1} and {b2}"
                    ))
                })?;
            if rng.gen::<f64>() < keep_first {
                b2.remove(e2);
                b2.insert(e1);
            } else {
                b1.remove(e1);
                b1.insert(e2);
            }
        }
        Ok(b1)
    }
}

/// Randomized swap rounding of a decomposition in `M_ℓ`. Atoms are merged as a
/// left fold; each exchange takes the smallest `e1 ∈ B1 \ B2` and the first
/// `e2 ∈ B2 \ B1` (by index) for which both swapped sets stay bases. Each element
/// ends up in the output with probability equal to its coordinate.
pub fn swap_round(d: &ConvexDecomposition, u: &UnionMatroid, seed: u64) -> Result<RoundedSet> {
    if d.ground_size() != u.ground_size() {
        return Err(Error::DimensionMismatch {
            expected: u.ground_size(),
            got: d.ground_size(),
        });
    }
    d.check_independent(u)?;
    let n = d.ground_size();
    let r = d.atoms().iter().map(|(_, s)| s.len()).max().unwrap_or(0);
    let padded = Padded { u, n, r };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut atoms = d.atoms().iter();
    let (w0, s0) = atoms
        .next()
        .ok_or_else(|| Error::Rounding("empty decomposition".into()))?;
    let mut acc_w = *w0;
    let mut acc = padded.pad(s0);
    for (w, s) in atoms {
        acc = padded.merge(acc_w, acc, *w, padded.pad(s), &mut rng)?;
        acc_w += w;
    }
    let set = padded.real(&acc);
    let witness = u
        .union_is_independent(&set)
        .ok_or_else(|| Error::Rounding(format!("rounded set {set} is not independent in M_ℓ")))?;
    Ok(RoundedSet { set, witness })
}

/// One rounding draw checked against the target `(1 - ε)·γ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundingOutcome {
    pub set: ElementSet,
    pub witness: Vec<ElementSet>,
    pub values: Vec<f64>,
    pub accepted: bool,
}

/// Decomposes `y`, draws one swap-rounded set and accepts it iff
/// `f_i(S) >= (1 - ε)·γ` for every objective.
pub fn round_and_certify(
    y: &FractionalPoint,
    u: &UnionMatroid,
    objectives: &[Oracle],
    gamma: f64,
    epsilon: f64,
    seed: u64,
) -> Result<RoundingOutcome> {
    let d = decompose(y, u)?;
    let RoundedSet { set, witness } = swap_round(&d, u, seed)?;
    let values: Vec<f64> = objectives.iter().map(|f| f.eval(&set)).collect();
    let target = (1.0 - epsilon) * gamma;
    let accepted = values.iter().all(|&v| v >= target - TOL * target.abs());
    Ok(RoundingOutcome {
        set,
        witness,
        values,
        accepted,
    })
}
