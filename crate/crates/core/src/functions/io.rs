use std::io::Read;

use serde::{Deserialize, Serialize};

use super::{FacilityLocation, GroundSet, Oracle, PerturbedFamily};
use crate::error::{Error, Result};

/// Ratings matrix as read from CSV: one column per element, one row per user.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingsTable {
    pub labels: Vec<String>,
    pub ratings: Vec<Vec<f64>>,
}

impl RatingsTable {
    pub fn ground(&self) -> Result<GroundSet> {
        GroundSet::with_labels(self.labels.clone())
    }

    pub fn facility_location(&self, r_max: f64) -> Result<FacilityLocation> {
        FacilityLocation::new(self.ratings.clone(), r_max)
    }
}

/// Reads a ratings CSV: a header row of element labels, then one row of decimal
/// ratings per user.
pub fn read_ratings_csv<R: Read>(reader: R) -> Result<RatingsTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let labels: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if labels.is_empty() {
        return Err(Error::param("ratings CSV has an empty header"));
    }
    let mut ratings = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let values = record
            .iter()
            .map(|cell| {
                cell.parse::<f64>().map_err(|_| {
                    Error::param(format!("ratings row {}: '{cell}' is not a number", row + 1))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        ratings.push(values);
    }
    Ok(RatingsTable { labels, ratings })
}

/// JSON description of a perturbed family: `{k, lambda_size, noise_scale, seed}`.
/// A missing `noise_scale` defaults to `1/n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbedFamilySpec {
    pub k: usize,
    pub lambda_size: usize,
    #[serde(default)]
    pub noise_scale: Option<f64>,
    pub seed: u64,
}

impl PerturbedFamilySpec {
    pub fn build(&self, base: Oracle) -> Result<PerturbedFamily> {
        let scale = self.noise_scale.unwrap_or(1.0 / base.ground_size() as f64);
        PerturbedFamily::generate(base, self.k, self.lambda_size, scale, self.seed)
    }
}
