use std::fmt;

use crate::set::ElementSet;

/// Errors raised by oracles, constraints and solvers.
#[derive(thiserror::Error, Debug)]
pub enum Error {
    /// A numeric parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// An element index does not belong to the ground set.
    #[error("element {element} out of range for ground set of size {n}")]
    ElementOutOfRange { element: usize, n: usize },
    /// Exhaustive routines refuse instances above their size limit.
    #[error("{what}: size {size} exceeds the exhaustive limit {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// An explicit set family failed one of the matroid axioms.
    #[error("not a matroid: {0}")]
    NotAMatroid(MatroidViolation),
    /// A fractional point lies outside the (union) matroid polytope.
    #[error("point outside the matroid polytope: y({set}) = {lhs} > {rhs} (subset {subset})")]
    OutsidePolytope {
        set: ElementSet,
        subset: ElementSet,
        lhs: f64,
        rhs: f64,
    },
    /// The direction-finding LP has no solution, so the target value is above the fractional optimum.
    #[error("gamma {gamma} too large: direction LP infeasible (best slack {slack})")]
    GammaTooLarge { gamma: f64, slack: f64 },
    #[error("operation unsupported: {0}")]
    Unsupported(String),
    #[error("swap rounding failed: {0}")]
    Rounding(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Counterexample to one of the matroid axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatroidViolation {
    EmptyNotIndependent,
    /// `superset` is independent but its subset `subset` is not.
    NotDownwardClosed {
        superset: ElementSet,
        subset: ElementSet,
    },
    /// `|small| < |large|`, both independent, and no element of `large \ small` extends `small`.
    NoExchange {
        small: ElementSet,
        large: ElementSet,
    },
    /// A listed set contains an element outside the ground set.
    ElementOutOfRange {
        element: usize,
        n: usize,
    },
}

impl fmt::Display for MatroidViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatroidViolation::EmptyNotIndependent => write!(f, "the empty set is not independent"),
            MatroidViolation::NotDownwardClosed { superset, subset } => write!(
                f,
                "{superset} is independent but its subset {subset} is not"
            ),
            MatroidViolation::NoExchange { small, large } => write!(
                f,
                "no element of {large} extends the smaller independent set {small}"
            ),
            MatroidViolation::ElementOutOfRange { element, n } => {
                write!(f, "element {element} outside ground set of size {n}")
            }
        }
    }
}
