use serde::Serialize;

use super::{GroundSet, Oracle};
use crate::error::{Error, Result};
use crate::set::ElementSet;

/// Largest ground set [`check_submodular_monotone`] will enumerate.
pub const EXHAUSTIVE_CHECK_LIMIT: usize = 16;

const SLACK: f64 = 1e-9;

/// `f_A(e) < f_B(e)` with `A ⊆ B ⊆ V - e`.
#[derive(Debug, Clone, Serialize)]
pub struct SubmodularityViolation {
    pub a: ElementSet,
    pub b: ElementSet,
    pub element: usize,
    pub gain_a: f64,
    pub gain_b: f64,
}

/// `f(A) > f(B)` with `A ⊆ B`.
#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityViolation {
    pub a: ElementSet,
    pub b: ElementSet,
    pub value_a: f64,
    pub value_b: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub submodular: bool,
    pub monotone: bool,
    pub nonnegative: bool,
    pub submodularity_violation: Option<SubmodularityViolation>,
    pub monotonicity_violation: Option<MonotonicityViolation>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.submodular && self.monotone && self.nonnegative
    }
}

/// Exhaustive check of diminishing returns and monotonicity.
///
/// Diminishing returns only needs to be checked for `B = A + e'`: a violation for
/// some `A ⊆ B` telescopes into a violation along a chain of single insertions.
/// Likewise monotonicity reduces to `f(A) <= f(A + e)`.
pub fn check_submodular_monotone(f: &Oracle, ground: &GroundSet) -> Result<PropertyReport> {
    let n = ground.len();
    if f.ground_size() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f.ground_size(),
        });
    }
    if n > EXHAUSTIVE_CHECK_LIMIT {
        return Err(Error::SizeLimit {
            what: "submodularity check",
            size: n,
            limit: EXHAUSTIVE_CHECK_LIMIT,
        });
    }
    let table: Vec<f64> = (0..1u64 << n)
        .map(|m| f.eval(&ElementSet::from_mask(m)))
        .collect();

    let mut report = PropertyReport {
        submodular: true,
        monotone: true,
        nonnegative: table[0] >= 0.0,
        submodularity_violation: None,
        monotonicity_violation: None,
    };
    for a in 0..1u64 << n {
        for e in 0..n {
            let eb = 1u64 << e;
            if a & eb != 0 {
                continue;
            }
            let gain_a = table[(a | eb) as usize] - table[a as usize];
            if report.monotone && gain_a < -SLACK {
                report.monotone = false;
                report.monotonicity_violation = Some(MonotonicityViolation {
                    a: ElementSet::from_mask(a),
                    b: ElementSet::from_mask(a | eb),
                    value_a: table[a as usize],
                    value_b: table[(a | eb) as usize],
                });
            }
            if !report.submodular {
                continue;
            }
            for e2 in 0..n {
                let b = a | (1u64 << e2);
                if e2 == e || b == a {
                    continue;
                }
                let gain_b = table[(b | eb) as usize] - table[b as usize];
                if gain_a < gain_b - SLACK {
                    report.submodular = false;
                    report.submodularity_violation = Some(SubmodularityViolation {
                        a: ElementSet::from_mask(a),
                        b: ElementSet::from_mask(b),
                        element: e,
                        gain_a,
                        gain_b,
                    });
                    break;
                }
            }
        }
        if !report.submodular && !report.monotone {
            break;
        }
    }
    Ok(report)
}
