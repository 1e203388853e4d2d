//! JSON instance files.
//!
//! ```json
//! {
//!   "genres": ["g1", "g2"],
//!   "target": {"g1": 0.5, "g2": 0.5},
//!   "items": [{"id": "i1", "dist": {"g1": 0.4, "g2": 0.6}}],
//!   "weights": [0.6, 0.4],
//!   "k": 2,
//!   "mode": "distributional"
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dist::{PositionWeights, Subdistribution};
use crate::error::{Error, Result};
use crate::instance::{Instance, Item, Mode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub genres: Vec<String>,
    pub target: BTreeMap<String, f64>,
    pub items: Vec<ItemEntry>,
    pub weights: Vec<f64>,
    pub k: usize,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ItemEntry {
    pub id: String,
    pub dist: BTreeMap<String, f64>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        let map = |d: &Subdistribution| d.iter().map(|(g, v)| (g.to_string(), v)).collect();
        InstanceFile {
            genres: inst.genres().to_vec(),
            target: map(inst.target()),
            items: inst.items().iter().map(|it| ItemEntry { id: it.id.clone(), dist: map(&it.dist) }).collect(),
            weights: inst.weights().to_vec(),
            k: inst.k(),
            mode: inst.mode(),
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        if self.k != self.weights.len() {
            return Err(Error::Parse(format!("k = {} but {} weights given", self.k, self.weights.len())));
        }
        let target = Subdistribution::new("target", self.target.iter().map(|(g, &v)| (g.clone(), v)))?;
        let items = self
            .items
            .iter()
            .map(|e| Ok(Item::new(e.id.clone(), Subdistribution::new(&e.id, e.dist.iter().map(|(g, &v)| (g.clone(), v)))?)))
            .collect::<Result<Vec<_>>>()?;
        let weights = PositionWeights::new(self.weights.clone())?;
        Instance::new(self.genres.clone(), target, items, weights, self.mode)
    }
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_instance()
}

/// Pretty-printed JSON document for `inst`.
pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(inst)).expect("instance files always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::two_genre_example;

    #[test]
    fn round_trip() {
        let inst = two_genre_example();
        assert_eq!(parse_instance(&instance_to_json(&inst)).unwrap(), inst);
    }

    #[test]
    fn unknown_field_rejected() {
        let text = instance_to_json(&two_genre_example()).replacen('{', "{\"extra\": 1,", 1);
        assert!(matches!(parse_instance(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn k_must_match_weights() {
        let mut f = InstanceFile::from_instance(&two_genre_example());
        f.k = 2;
        assert!(matches!(f.to_instance(), Err(Error::Parse(_))));
    }

    #[test]
    fn validation_errors_surface() {
        let mut f = InstanceFile::from_instance(&two_genre_example());
        f.items[0].dist.insert("g9".into(), 0.1);
        assert!(f.to_instance().is_err());
        f.items[0].dist.remove("g9");
        f.target.insert("g1".into(), 0.9);
        assert!(matches!(f.to_instance(), Err(Error::MassExceedsOne { .. })));
    }
}
