use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::ElementSet;

/// `S` feasible iff `sum_{e in S} c_e <= capacity`. JSON form: `{costs, capacity}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawKnapsack")]
pub struct KnapsackConstraint {
    costs: Vec<f64>,
    capacity: f64,
}

#[derive(Deserialize)]
struct RawKnapsack {
    costs: Vec<f64>,
    #[serde(default = "unit")]
    capacity: f64,
}

fn unit() -> f64 {
    1.0
}

impl TryFrom<RawKnapsack> for KnapsackConstraint {
    type Error = Error;

    fn try_from(raw: RawKnapsack) -> Result<Self> {
        Self::new(raw.costs, raw.capacity)
    }
}

impl KnapsackConstraint {
    pub fn new(costs: Vec<f64>, capacity: f64) -> Result<Self> {
        if costs.is_empty() {
            return Err(Error::param("knapsack needs at least one element"));
        }
        if let Some((e, c)) = costs
            .iter()
            .enumerate()
            .find(|(_, c)| !(c.is_finite() && **c > 0.0))
        {
            return Err(Error::param(format!(
                "knapsack cost of element {e} is {c}; costs must be positive"
            )));
        }
        if !(capacity.is_finite() && capacity > 0.0) {
            return Err(Error::param(format!(
                "knapsack capacity {capacity} must be positive"
            )));
        }
        Ok(Self { costs, capacity })
    }

    /// Unit capacity, as in the normalized formulation.
    pub fn normalized(costs: Vec<f64>) -> Result<Self> {
        Self::new(costs, 1.0)
    }

    pub fn ground_size(&self) -> usize {
        self.costs.len()
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn cost_of(&self, e: usize) -> f64 {
        self.costs[e]
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn cost(&self, set: &ElementSet) -> f64 {
        set.iter().map(|e| self.costs[e]).sum()
    }

    pub fn is_feasible(&self, set: &ElementSet) -> bool {
        set.bound() <= self.costs.len() && self.cost(set) <= self.capacity + 1e-12
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasibility_by_cost() {
        let k = KnapsackConstraint::normalized(vec![0.5, 0.4, 0.3]).unwrap();
        assert!(k.is_feasible(&[0, 1].into_iter().collect()));
        assert!(!k.is_feasible(&[0, 1, 2].into_iter().collect()));
        assert!((k.cost(&ElementSet::full(3)) - 1.2).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_costs() {
        assert!(KnapsackConstraint::normalized(vec![0.5, 0.0]).is_err());
        assert!(KnapsackConstraint::normalized(vec![-1.0]).is_err());
        assert!(KnapsackConstraint::new(vec![1.0], 0.0).is_err());
    }

    #[test]
    fn json_defaults_to_unit_capacity() {
        let k: KnapsackConstraint = serde_json::from_str(r#"{"costs": [0.2, 0.9]}"#).unwrap();
        assert_eq!(k.capacity(), 1.0);
        assert!(serde_json::from_str::<KnapsackConstraint>(r#"{"costs": [0.2, -1]}"#).is_err());
    }
}
