//! Problem instances: catalog, target distribution, position weights.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::dist::{PositionWeights, Subdistribution};
use crate::error::{Error, Result};

/// Whether items carry genre mixtures or a single genre each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Distributional,
    Discrete,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Distributional => f.write_str("distributional"),
            Mode::Discrete => f.write_str("discrete"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Item {
    pub id: String,
    pub dist: Subdistribution,
}

impl Item {
    pub fn new(id: impl Into<String>, dist: Subdistribution) -> Self {
        Item { id: id.into(), dist }
    }
}

/// A validated calibration instance.
///
/// Genres and items are kept in lexicographic id order; every index-based
/// API in this crate refers to that order.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    genres: Vec<String>,
    target: Subdistribution,
    items: Vec<Item>,
    weights: PositionWeights,
    mode: Mode,
    target_dense: Vec<f64>,
    item_rows: Vec<Vec<f64>>,
}

/// The elements a sequence is built from, with their dense genre rows.
///
/// In distributional mode these are the catalog items; in discrete mode they
/// are the genres themselves (each a point mass), with unlimited supply.
#[derive(Debug, Clone, PartialEq)]
pub struct Universe {
    pub ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Universe {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.binary_search_by(|probe| probe.as_str().cmp(id)).ok()
    }

    pub fn labels(&self, seq: &[usize]) -> Vec<String> {
        seq.iter().map(|&e| self.ids[e].clone()).collect()
    }
}

impl Instance {
    /// Checks every instance invariant and returns the validated instance.
    ///
    /// Reports the first violation found: genre ids, target, weights, then items
    /// in id order.
    pub fn new(
        genres: Vec<String>,
        target: Subdistribution,
        items: Vec<Item>,
        weights: PositionWeights,
        mode: Mode,
    ) -> Result<Self> {
        if genres.is_empty() {
            return Err(Error::EmptyGenres);
        }
        let mut seen = BTreeSet::new();
        for g in &genres {
            if !seen.insert(g.as_str()) {
                return Err(Error::DuplicateId(g.clone()));
            }
        }
        let mut genres = genres;
        genres.sort();

        check_over(&genres, "target", &target)?;
        if !target.is_full() {
            return Err(Error::NotFull { owner: "target".into(), sum: target.total() });
        }

        let mut items = items;
        items.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(pair) = items.windows(2).find(|p| p[0].id == p[1].id) {
            return Err(Error::DuplicateId(pair[0].id.clone()));
        }
        if mode == Mode::Distributional && items.is_empty() {
            return Err(Error::EmptyItems);
        }
        for item in &items {
            check_over(&genres, &item.id, &item.dist)?;
            if !item.dist.is_full() {
                return Err(Error::NotFull { owner: item.id.clone(), sum: item.dist.total() });
            }
            if mode == Mode::Discrete
                && !(item.dist.support_len() == 1 && item.dist.iter().all(|(_, v)| v == 1.0))
            {
                return Err(Error::NotPointMass(item.id.clone()));
            }
        }

        let target_dense = target.to_dense(&genres);
        let item_rows = items.iter().map(|it| it.dist.to_dense(&genres)).collect();
        Ok(Instance { genres, target, items, weights, mode, target_dense, item_rows })
    }

    pub fn genres(&self) -> &[String] {
        &self.genres
    }

    pub fn target(&self) -> &Subdistribution {
        &self.target
    }

    /// Target as a dense vector in genre order.
    pub fn target_dense(&self) -> &[f64] {
        &self.target_dense
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn item_rows(&self) -> &[Vec<f64>] {
        &self.item_rows
    }

    pub fn weights(&self) -> &PositionWeights {
        &self.weights
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// List length.
    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn item_index(&self, id: &str) -> Result<usize> {
        self.items
            .binary_search_by(|it| it.id.as_str().cmp(id))
            .map_err(|_| Error::UnknownItem(id.to_string()))
    }

    pub fn genre_index(&self, id: &str) -> Option<usize> {
        self.genres.binary_search_by(|g| g.as_str().cmp(id)).ok()
    }

    pub fn item_universe(&self) -> Universe {
        Universe {
            ids: self.items.iter().map(|it| it.id.clone()).collect(),
            rows: self.item_rows.clone(),
        }
    }

    /// One point-mass element per genre.
    pub fn genre_universe(&self) -> Universe {
        let n = self.genres.len();
        Universe {
            ids: self.genres.clone(),
            rows: (0..n)
                .map(|g| {
                    let mut row = vec![0.0; n];
                    row[g] = 1.0;
                    row
                })
                .collect(),
        }
    }

    /// Genres in discrete mode, items otherwise.
    pub fn default_universe(&self) -> Universe {
        match self.mode {
            Mode::Discrete => self.genre_universe(),
            Mode::Distributional => self.item_universe(),
        }
    }

    /// Same catalog and target with a different weight profile.
    pub fn with_weights(&self, weights: PositionWeights) -> Instance {
        Instance { weights, ..self.clone() }
    }
}

fn check_over(genres: &[String], owner: &str, dist: &Subdistribution) -> Result<()> {
    for (g, _) in dist.iter() {
        if genres.binary_search_by(|probe| probe.as_str().cmp(g)).is_err() {
            return Err(Error::UnknownGenre { owner: owner.to_string(), genre: g.to_string() });
        }
    }
    Ok(())
}

/// Convenience alias matching the operation name used across the CLI.
pub fn validate_instance(
    genres: Vec<String>,
    target: Subdistribution,
    items: Vec<Item>,
    weights: PositionWeights,
    mode: Mode,
) -> Result<Instance> {
    Instance::new(genres, target, items, weights, mode)
}

/// The four-item, two-genre instance with weights (0.5, 0.3, 0.2) used as a
/// running example for context-dependent orderings.
pub fn two_genre_example() -> Instance {
    let g = |a: f64, b: f64| Subdistribution::full("item", [("g1", a), ("g2", b)]).unwrap();
    Instance::new(
        vec!["g1".into(), "g2".into()],
        g(0.5, 0.5),
        vec![
            Item::new("i1", g(0.4, 0.6)),
            Item::new("i2", g(0.8, 0.2)),
            Item::new("i3", g(1.0, 0.0)),
            Item::new("i4", g(0.0, 1.0)),
        ],
        PositionWeights::new(vec![0.5, 0.3, 0.2]).unwrap(),
        Mode::Distributional,
    )
    .expect("example instance is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Subdistribution {
        Subdistribution::full("t", [("g1", 0.5), ("g2", 0.5)]).unwrap()
    }

    fn w() -> PositionWeights {
        PositionWeights::new(vec![0.5, 0.3, 0.2]).unwrap()
    }

    #[test]
    fn example_instance_accepted() {
        let inst = two_genre_example();
        assert_eq!(inst.k(), 3);
        assert_eq!(inst.items().len(), 4);
        assert_eq!(inst.target_dense(), &[0.5, 0.5]);
    }

    #[test]
    fn duplicate_item_rejected() {
        let items = vec![Item::new("i1", half()), Item::new("i1", half())];
        let err = Instance::new(vec!["g1".into(), "g2".into()], half(), items, w(), Mode::Distributional)
            .unwrap_err();
        assert_eq!(err, Error::DuplicateId("i1".into()));
    }

    #[test]
    fn discrete_requires_point_masses() {
        let items = vec![Item::new("i1", half())];
        let err =
            Instance::new(vec!["g1".into(), "g2".into()], half(), items, w(), Mode::Discrete).unwrap_err();
        assert_eq!(err, Error::NotPointMass("i1".into()));
    }

    #[test]
    fn unknown_genre_rejected() {
        let items = vec![Item::new("i1", Subdistribution::point("g9"))];
        let err = Instance::new(vec!["g1".into(), "g2".into()], half(), items, w(), Mode::Distributional)
            .unwrap_err();
        assert!(matches!(err, Error::UnknownGenre { .. }));
    }

    #[test]
    fn partial_target_rejected() {
        let t = Subdistribution::new("t", [("g1", 0.5)]).unwrap();
        let items = vec![Item::new("i1", half())];
        let err = Instance::new(vec!["g1".into(), "g2".into()], t, items, w(), Mode::Distributional)
            .unwrap_err();
        assert!(matches!(err, Error::NotFull { .. }));
    }

    #[test]
    fn genre_universe_is_identity() {
        let u = two_genre_example().genre_universe();
        assert_eq!(u.rows, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(u.index_of("g2"), Some(1));
    }
}
