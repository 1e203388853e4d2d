//! Genre subdistributions and position-weight profiles.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for "sums to one" and "at most one" checks.
pub const MASS_TOL: f64 = 1e-9;

/// A nonnegative genre-indexed weight vector with total mass at most one.
///
/// Only nonzero entries are stored; a missing genre has mass zero.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subdistribution(BTreeMap<String, f64>);

impl Subdistribution {
    /// Builds a subdistribution, checking every entry is finite and nonnegative
    /// and that the total does not exceed one.
    pub fn new<I, S>(owner: &str, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (genre, value) in entries {
            let genre = genre.into();
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidMass { owner: owner.to_string(), genre, value });
            }
            if value > 0.0 {
                *map.entry(genre).or_insert(0.0) += value;
            }
        }
        let out = Subdistribution(map);
        let sum = out.total();
        if sum > 1.0 + MASS_TOL {
            return Err(Error::MassExceedsOne { owner: owner.to_string(), sum });
        }
        Ok(out)
    }

    /// Like [`Subdistribution::new`] but also requires the mass to be one.
    pub fn full<I, S>(owner: &str, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let out = Self::new(owner, entries)?;
        let sum = out.total();
        if (sum - 1.0).abs() > MASS_TOL {
            return Err(Error::NotFull { owner: owner.to_string(), sum });
        }
        Ok(out)
    }

    /// Point mass on a single genre.
    pub fn point(genre: impl Into<String>) -> Self {
        let mut map = BTreeMap::new();
        map.insert(genre.into(), 1.0);
        Subdistribution(map)
    }

    /// Reads a dense vector back into sparse form over `genres`.
    pub fn from_dense(genres: &[String], dense: &[f64]) -> Self {
        Subdistribution(
            genres
                .iter()
                .zip(dense)
                .filter(|(_, &v)| v != 0.0)
                .map(|(g, &v)| (g.clone(), v))
                .collect(),
        )
    }

    pub fn get(&self, genre: &str) -> f64 {
        self.0.get(genre).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.0.values().sum()
    }

    pub fn is_full(&self) -> bool {
        (self.total() - 1.0).abs() <= MASS_TOL
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(g, &v)| (g.as_str(), v))
    }

    pub fn support_len(&self) -> usize {
        self.0.len()
    }

    /// Dense vector over `genres`; entries for genres outside the list are dropped.
    pub fn to_dense(&self, genres: &[String]) -> Vec<f64> {
        genres.iter().map(|g| self.get(g)).collect()
    }
}

/// Attention mass per list position, weakly decreasing and summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PositionWeights(Vec<f64>);

impl PositionWeights {
    /// Validates a weight profile. A total within `1e-9` of one is kept as
    /// given, one within `1e-6` is rescaled, anything further off is rejected.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyWeights);
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight { position: i + 1, value: w });
            }
        }
        if let Some(i) = weights.windows(2).position(|pair| pair[1] > pair[0]) {
            return Err(Error::WeightsNotDecreasing { position: i + 2 });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(Error::WeightSum { sum });
        }
        if (sum - 1.0).abs() <= MASS_TOL {
            return Ok(PositionWeights(weights));
        }
        Ok(PositionWeights(weights.into_iter().map(|w| w / sum).collect()))
    }

    /// Builds a profile from arbitrary nonnegative decreasing scores by
    /// normalizing them to sum to one.
    pub fn normalized(scores: Vec<f64>) -> Result<Self> {
        let sum: f64 = scores.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::WeightSum { sum });
        }
        Self::new(scores.into_iter().map(|s| s / sum).collect())
    }

    pub fn uniform(k: usize) -> Result<Self> {
        Self::normalized(vec![1.0; k])
    }

    /// `w_j ∝ ratio^(j-1)`.
    pub fn geometric(k: usize, ratio: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&ratio) || ratio == 0.0 {
            return Err(Error::ParameterOutOfRange(format!("geometric ratio {ratio} not in (0,1]")));
        }
        Self::normalized((0..k).map(|j| ratio.powi(j as i32)).collect())
    }

    /// DCG-style discount `w_j ∝ 1 / log2(j + 1)`.
    pub fn dcg(k: usize) -> Result<Self> {
        Self::normalized((1..=k).map(|j| 1.0 / ((j + 1) as f64).log2()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// The first `len` weights renormalized to sum to one.
    pub fn prefix(&self, len: usize) -> Result<Self> {
        if len == 0 || len > self.0.len() {
            return Err(Error::ParameterOutOfRange(format!(
                "prefix length {len} not in 1..={}",
                self.0.len()
            )));
        }
        Self::normalized(self.0[..len].to_vec())
    }
}

impl TryFrom<Vec<f64>> for PositionWeights {
    type Error = Error;

    fn try_from(value: Vec<f64>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<PositionWeights> for Vec<f64> {
    fn from(value: PositionWeights) -> Self {
        value.0
    }
}

impl std::ops::Deref for PositionWeights {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}
