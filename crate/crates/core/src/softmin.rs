//! Soft-min aggregation `H = -(1/α)·ln Σ e^{-α g_i}` of several smooth objectives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::Oracle;
use crate::multilinear::{EstimatorConfig, Evaluator, FractionalPoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SoftMinConfig {
    pub alpha: f64,
}

impl SoftMinConfig {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha })
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::param(format!(
            "soft-min sharpness {alpha} must be positive and finite"
        )));
    }
    Ok(())
}

fn check_values(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::param("soft-min of an empty collection"));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::param(format!("soft-min input {v} is not finite")));
    }
    Ok(values.iter().copied().fold(f64::INFINITY, f64::min))
}

/// `H = g_min - (1/α)·ln Σ e^{-α(g_i - g_min)}`; every exponent is `<= 0`, so
/// nothing overflows and the sum is at least 1.
pub fn softmin_value(values: &[f64], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let lo = check_values(values)?;
    let s: f64 = values.iter().map(|g| (-alpha * (g - lo)).exp()).sum();
    Ok(lo - s.ln() / alpha)
}

/// Softmax of `-α·g`.
pub fn softmin_weights(values: &[f64], alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let lo = check_values(values)?;
    let w: Vec<f64> = values.iter().map(|g| (-alpha * (g - lo)).exp()).collect();
    let s: f64 = w.iter().sum();
    Ok(w.into_iter().map(|x| x / s).collect())
}

/// `Σ_i p_i ∇g_i`.
pub fn softmin_gradient(gradients: &[Vec<f64>], p: &[f64]) -> Result<Vec<f64>> {
    if gradients.len() != p.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: gradients.len(),
        });
    }
    let n = gradients.first().map_or(0, Vec::len);
    let mut out = vec![0.0; n];
    for (g, &w) in gradients.iter().zip(p) {
        if g.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g.len(),
            });
        }
        for (o, x) in out.iter_mut().zip(g) {
            *o += w * x;
        }
    }
    Ok(out)
}

/// Soft-min of the extensions at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoftMinPoint {
    pub value: f64,
    /// `F_i(y)` (estimates in sampled mode).
    pub objective_values: Vec<f64>,
    pub weights: Vec<f64>,
    /// `∇H(y)`.
    pub gradient: Vec<f64>,
    /// `Δ_eH(y) = (1 - y_e)·∇_eH(y)`.
    pub delta: Vec<f64>,
}

/// Evaluates `H` over the evaluator's extensions at `y`. Weights come from the
/// same (possibly sampled) values used for the gradients.
pub fn softmin_point(eval: &Evaluator, y: &FractionalPoint, alpha: f64) -> Result<SoftMinPoint> {
    let points = eval.points(y)?;
    let values: Vec<f64> = points.iter().map(|p| p.value).collect();
    let weights = softmin_weights(&values, alpha)?;
    let grads: Vec<Vec<f64>> = points.into_iter().map(|p| p.gradient).collect();
    let gradient = softmin_gradient(&grads, &weights)?;
    let delta = gradient
        .iter()
        .zip(y.as_slice())
        .map(|(g, ye)| ((1.0 - ye) * g).max(0.0))
        .collect();
    Ok(SoftMinPoint {
        value: softmin_value(&values, alpha)?,
        objective_values: values,
        weights,
        gradient,
        delta,
    })
}

/// `Δ_eH(y)` for every `e`, with exact extensions for small ground sets.
pub fn delta_h(
    objectives: &[Oracle],
    y: &FractionalPoint,
    alpha: f64,
    cfg: &EstimatorConfig,
) -> Result<Vec<f64>> {
    let eval = Evaluator::auto(objectives, *cfg)?;
    Ok(softmin_point(&eval, y, alpha)?.delta)
}
