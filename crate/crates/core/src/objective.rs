//! Induced list distributions and the sequence / set-function objectives.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::dist::Subdistribution;
use crate::error::{Error, Result};
use crate::instance::{Instance, Universe};
use crate::measure::{Overlap, OverlapMeasure};

/// An ordered list of element indices into a [`Universe`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sequence(pub Vec<usize>);

impl Sequence {
    pub fn new(elements: Vec<usize>) -> Self {
        Sequence(elements)
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    pub fn has_repeats(&self) -> bool {
        let mut seen = BTreeSet::new();
        !self.0.iter().all(|e| seen.insert(*e))
    }
}

impl Deref for Sequence {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Sequence {
    fn from(v: Vec<usize>) -> Self {
        Sequence(v)
    }
}

/// A set of (item, slot) pairs; slots are zero-based (slot 0 is the top of
/// the list).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ItemPositionSet {
    pairs: BTreeSet<(usize, usize)>,
}

impl ItemPositionSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a set, checking every pair lies in the `items × slots` grid.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>, items: usize, slots: usize) -> Result<Self> {
        let mut out = Self::new();
        for (item, slot) in pairs {
            if item >= items || slot >= slots {
                return Err(Error::InvalidPair { item, slot, items, slots });
            }
            out.pairs.insert((item, slot));
        }
        Ok(out)
    }

    /// `{(seq_j, j)}`.
    pub fn from_sequence(seq: &[usize]) -> Self {
        ItemPositionSet { pairs: seq.iter().enumerate().map(|(j, &i)| (i, j)).collect() }
    }

    pub fn insert(&mut self, item: usize, slot: usize) -> bool {
        self.pairs.insert((item, slot))
    }

    pub fn remove(&mut self, item: usize, slot: usize) -> bool {
        self.pairs.remove(&(item, slot))
    }

    pub fn contains(&self, item: usize, slot: usize) -> bool {
        self.pairs.contains(&(item, slot))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn is_subset(&self, other: &ItemPositionSet) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// Earliest slot of every item present, `None` for absent items.
    pub fn earliest_slots(&self, items: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; items];
        for &(i, j) in &self.pairs {
            if i < items {
                out[i] = Some(out[i].map_or(j, |cur: usize| cur.min(j)));
            }
        }
        out
    }

    pub(crate) fn check_bounds(&self, items: usize, slots: usize) -> Result<()> {
        match self.pairs.iter().find(|&&(i, j)| i >= items || j >= slots) {
            Some(&(item, slot)) => Err(Error::InvalidPair { item, slot, items, slots }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for ItemPositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, (i, j)) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({i},{})", j + 1)?;
        }
        f.write_str("}")
    }
}

/// `q(π) = Σ_j w_j q_{π_j}` written into `out` (dense, genre order). Only
/// the first `seq.len()` weights are used.
pub fn induced_dense(weights: &[f64], rows: &[Vec<f64>], seq: &[usize], out: &mut [f64]) {
    out.iter_mut().for_each(|x| *x = 0.0);
    for (w, &e) in weights.iter().zip(seq) {
        for (o, r) in out.iter_mut().zip(&rows[e]) {
            *o += w * r;
        }
    }
}

/// Evaluates `G(p, q(π))` for sequences over a fixed universe, reusing one
/// scratch buffer per call site.
#[derive(Clone, Copy)]
pub struct SequenceObjective<'a> {
    pub measure: &'a dyn Overlap,
    pub target: &'a [f64],
    pub weights: &'a [f64],
    pub rows: &'a [Vec<f64>],
}

impl<'a> SequenceObjective<'a> {
    pub fn new(measure: &'a dyn Overlap, target: &'a [f64], weights: &'a [f64], universe: &'a Universe) -> Result<Self> {
        measure.check_target(target)?;
        Ok(SequenceObjective { measure, target, weights, rows: &universe.rows })
    }

    pub fn value(&self, seq: &[usize]) -> f64 {
        let mut q = vec![0.0; self.target.len()];
        self.value_with(seq, &mut q)
    }

    pub fn value_with(&self, seq: &[usize], scratch: &mut [f64]) -> f64 {
        induced_dense(self.weights, self.rows, seq, scratch);
        self.measure.overlap(self.target, scratch)
    }

    pub fn universe_size(&self) -> usize {
        self.rows.len()
    }
}

fn check_sequence(seq: &[usize], universe: &Universe, k: usize) -> Result<()> {
    if seq.len() > k {
        return Err(Error::SequenceTooLong { len: seq.len(), k });
    }
    if let Some(&index) = seq.iter().find(|&&e| e >= universe.len()) {
        return Err(Error::ElementOutOfRange { index, size: universe.len() });
    }
    Ok(())
}

/// Genre distribution induced by a list over the instance's default universe
/// (items, or genres in discrete mode). Its mass is the sum of the weights
/// actually used.
pub fn induced_distribution(seq: &[usize], inst: &Instance) -> Result<Subdistribution> {
    let universe = inst.default_universe();
    check_sequence(seq, &universe, inst.k())?;
    let mut q = vec![0.0; inst.genres().len()];
    induced_dense(inst.weights(), &universe.rows, seq, &mut q);
    Ok(Subdistribution::from_dense(inst.genres(), &q))
}

/// Looks up item ids (or genre ids in discrete mode) and returns the sequence.
pub fn sequence_from_ids<S: AsRef<str>>(ids: &[S], inst: &Instance) -> Result<Sequence> {
    let universe = inst.default_universe();
    ids.iter()
        .map(|id| universe.index_of(id.as_ref()).ok_or_else(|| Error::UnknownItem(id.as_ref().to_string())))
        .collect::<Result<Vec<_>>>()
        .map(Sequence)
}

/// `G(π) = G(p, q(π))`.
pub fn seq_objective(measure: &OverlapMeasure, seq: &[usize], inst: &Instance) -> Result<f64> {
    let universe = inst.default_universe();
    check_sequence(seq, &universe, inst.k())?;
    let obj = SequenceObjective::new(measure, inst.target_dense(), inst.weights(), &universe)?;
    Ok(obj.value(seq))
}

/// Dense `q` of the earliest-occurrence extension: item `i` contributes
/// `w_{ℓ_R(i)} q_i`.
pub fn earliest_position_dense(set: &ItemPositionSet, weights: &[f64], rows: &[Vec<f64>], out: &mut [f64]) {
    out.iter_mut().for_each(|x| *x = 0.0);
    for (item, slot) in set.earliest_slots(rows.len()).into_iter().enumerate() {
        if let Some(j) = slot {
            for (o, r) in out.iter_mut().zip(&rows[item]) {
                *o += weights[j] * r;
            }
        }
    }
}

/// Dense `q` of the every-occurrence extension: each pair `(i, j)` adds `w_j q_i`.
pub fn every_occurrence_dense(set: &ItemPositionSet, weights: &[f64], rows: &[Vec<f64>], out: &mut [f64]) {
    out.iter_mut().for_each(|x| *x = 0.0);
    for (item, slot) in set.iter() {
        for (o, r) in out.iter_mut().zip(&rows[item]) {
            *o += weights[slot] * r;
        }
    }
}

/// `F_G(R)`: each item counts once, at the weight of its earliest slot in `R`.
pub fn fg_set(measure: &OverlapMeasure, set: &ItemPositionSet, inst: &Instance) -> Result<f64> {
    set.check_bounds(inst.items().len(), inst.k())?;
    measure.check_target(inst.target_dense())?;
    let mut q = vec![0.0; inst.genres().len()];
    earliest_position_dense(set, inst.weights(), inst.item_rows(), &mut q);
    Ok(measure.overlap(inst.target_dense(), &q))
}

/// `F̂_G(R)`: every pair counts, so repeated items add up.
pub fn hatfg_set(measure: &OverlapMeasure, set: &ItemPositionSet, inst: &Instance) -> Result<f64> {
    set.check_bounds(inst.items().len(), inst.k())?;
    measure.check_target(inst.target_dense())?;
    let mut q = vec![0.0; inst.genres().len()];
    every_occurrence_dense(set, inst.weights(), inst.item_rows(), &mut q);
    Ok(measure.overlap(inst.target_dense(), &q))
}
