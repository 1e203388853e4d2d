//! Matroids over item–slot pairs and the continuous-greedy pipeline.
//!
//! The ground set is `items × slots`, flattened as `item * slots + slot`.
//! Two matroids are used:
//!
//! * partition: at most one item per slot (lists with repeats);
//! * laminar: at most `ℓ` pairs among the first `ℓ` slots, for every `ℓ`
//!   (turned into repeat-free lists by [`set_to_sequence`]).
//!
//! Both are laminar families with box constraints, which describe their
//! independence polytopes exactly; [`Matroid::constraints`] exposes them to
//! the rounding code.

mod continuous;
mod rounding;
mod solve;

pub use continuous::{
    continuous_greedy, multilinear_estimate, EarliestPosition, Estimate, EveryOccurrence, FnSetFunction,
    SetFunction,
};
pub use rounding::{decompose, lift_to_base, swap_round};
pub use solve::{set_to_sequence, solve_distributional, solve_with_repeats, ContinuousParams, Solution};

use crate::error::{Error, Result};
use crate::objective::ItemPositionSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatroidKind {
    Partition,
    Laminar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Matroid {
    pub kind: MatroidKind,
    pub items: usize,
    pub slots: usize,
}

/// A capacity constraint `|R ∩ members| ≤ capacity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub members: Vec<usize>,
    pub capacity: usize,
}

impl Matroid {
    pub fn partition(items: usize, slots: usize) -> Self {
        Matroid { kind: MatroidKind::Partition, items, slots }
    }

    pub fn laminar(items: usize, slots: usize) -> Self {
        Matroid { kind: MatroidKind::Laminar, items, slots }
    }

    pub fn ground_size(&self) -> usize {
        self.items * self.slots
    }

    pub fn element(&self, item: usize, slot: usize) -> usize {
        item * self.slots + slot
    }

    pub fn pair(&self, element: usize) -> (usize, usize) {
        (element / self.slots, element % self.slots)
    }

    /// Size of every basis.
    pub fn rank(&self) -> usize {
        if self.items == 0 {
            0
        } else {
            self.slots
        }
    }

    pub fn constraints(&self) -> Vec<Constraint> {
        let slot_members = |pred: &dyn Fn(usize) -> bool| -> Vec<usize> {
            (0..self.ground_size()).filter(|&e| pred(e % self.slots)).collect()
        };
        match self.kind {
            MatroidKind::Partition => (0..self.slots)
                .map(|l| Constraint { members: slot_members(&|j| j == l), capacity: 1 })
                .collect(),
            MatroidKind::Laminar => (1..=self.slots)
                .map(|l| Constraint { members: slot_members(&|j| j < l), capacity: l })
                .collect(),
        }
    }

    /// Independence test on per-slot pair counts.
    pub fn is_independent_counts(&self, per_slot: &[usize]) -> bool {
        match self.kind {
            MatroidKind::Partition => per_slot.iter().all(|&c| c <= 1),
            MatroidKind::Laminar => {
                let mut prefix = 0;
                per_slot.iter().enumerate().all(|(l, &c)| {
                    prefix += c;
                    prefix <= l + 1
                })
            }
        }
    }

    pub fn is_independent(&self, set: &ItemPositionSet) -> bool {
        let mut per_slot = vec![0usize; self.slots];
        for (i, j) in set.iter() {
            if i >= self.items || j >= self.slots {
                return false;
            }
            per_slot[j] += 1;
        }
        self.is_independent_counts(&per_slot)
    }

    pub(crate) fn is_independent_elements(&self, elements: &[usize]) -> bool {
        let mut per_slot = vec![0usize; self.slots];
        for &e in elements {
            per_slot[e % self.slots] += 1;
        }
        self.is_independent_counts(&per_slot)
    }

    pub fn is_basis(&self, set: &ItemPositionSet) -> bool {
        set.len() == self.rank() && self.is_independent(set)
    }

    /// Maximum-weight basis by the matroid greedy rule: elements in decreasing
    /// weight (ties by element index), kept while independent. Elements listed
    /// in `allowed` only, when given.
    pub fn max_weight_basis(&self, weights: &[f64], allowed: Option<&[bool]>) -> Vec<usize> {
        let mut order: Vec<usize> =
            (0..self.ground_size()).filter(|&e| allowed.is_none_or(|a| a[e])).collect();
        order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
        let mut per_slot = vec![0usize; self.slots];
        let mut basis = Vec::with_capacity(self.rank());
        for e in order {
            let slot = e % self.slots;
            per_slot[slot] += 1;
            if self.is_independent_counts(&per_slot) {
                basis.push(e);
                if basis.len() == self.rank() {
                    break;
                }
            } else {
                per_slot[slot] -= 1;
            }
        }
        basis.sort_unstable();
        basis
    }

    pub fn to_set(&self, elements: &[usize]) -> ItemPositionSet {
        let mut set = ItemPositionSet::new();
        for &e in elements {
            let (i, j) = self.pair(e);
            set.insert(i, j);
        }
        set
    }

    pub fn to_elements(&self, set: &ItemPositionSet) -> Result<Vec<usize>> {
        set.check_bounds(self.items, self.slots)?;
        Ok(set.iter().map(|(i, j)| self.element(i, j)).collect())
    }
}

/// Alias kept for the operation name used by callers.
pub fn is_independent(m: &Matroid, set: &ItemPositionSet) -> bool {
    m.is_independent(set)
}

/// A point of `[0,1]^(items × slots)`, optionally carrying the convex
/// combination of bases it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalPoint {
    pub items: usize,
    pub slots: usize,
    pub x: Vec<f64>,
    pub decomposition: Option<Vec<(f64, Vec<usize>)>>,
}

impl FractionalPoint {
    pub fn zeros(items: usize, slots: usize) -> Self {
        FractionalPoint { items, slots, x: vec![0.0; items * slots], decomposition: None }
    }

    pub fn from_dense(items: usize, slots: usize, x: Vec<f64>) -> Result<Self> {
        if x.len() != items * slots {
            return Err(Error::ParameterOutOfRange(format!(
                "point has {} coordinates, expected {}",
                x.len(),
                items * slots
            )));
        }
        if let Some(v) = x.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::ParameterOutOfRange(format!("coordinate {v} outside [0, 1]")));
        }
        Ok(FractionalPoint { items, slots, x, decomposition: None })
    }

    pub fn indicator(items: usize, slots: usize, set: &ItemPositionSet) -> Self {
        let mut p = Self::zeros(items, slots);
        for (i, j) in set.iter() {
            p.x[i * slots + j] = 1.0;
        }
        p
    }

    pub fn get(&self, item: usize, slot: usize) -> f64 {
        self.x[item * self.slots + slot]
    }

    pub fn set(&mut self, item: usize, slot: usize, value: f64) {
        self.x[item * self.slots + slot] = value;
    }

    /// Largest violation of the box or any capacity constraint of `m`.
    pub fn polytope_excess(&self, m: &Matroid) -> f64 {
        let box_excess = self.x.iter().map(|&v| (v - 1.0).max(-v)).fold(0.0, f64::max);
        m.constraints()
            .iter()
            .map(|c| c.members.iter().map(|&e| self.x[e]).sum::<f64>() - c.capacity as f64)
            .fold(box_excess, f64::max)
    }

    pub fn is_integral(&self, tol: f64) -> bool {
        self.x.iter().all(|&v| v <= tol || v >= 1.0 - tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(pairs: &[(usize, usize)]) -> ItemPositionSet {
        ItemPositionSet::from_pairs(pairs.iter().copied(), 3, 2).unwrap()
    }

    #[test]
    fn laminar_independence() {
        let m = Matroid::laminar(3, 2);
        assert!(!m.is_independent(&set(&[(0, 0), (1, 0)])));
        assert!(m.is_independent(&set(&[(0, 0), (1, 1)])));
        assert!(m.is_independent(&set(&[(0, 1), (1, 1)])));
        assert!(!m.is_independent(&set(&[(0, 1), (1, 1), (2, 1)])));
    }

    #[test]
    fn partition_independence() {
        let m = Matroid::partition(3, 2);
        assert!(!m.is_independent(&set(&[(0, 0), (1, 0)])));
        assert!(m.is_independent(&set(&[(0, 0), (0, 1)])));
    }

    #[test]
    fn greedy_basis_respects_prefix_capacity() {
        let m = Matroid::laminar(2, 3);
        // Heaviest elements all in slot 0; only one may be kept there.
        let w = [9.0, 1.0, 1.0, 8.0, 1.0, 1.0];
        let b = m.max_weight_basis(&w, None);
        assert_eq!(b.len(), 3);
        assert!(m.is_basis(&m.to_set(&b)));
        assert!(b.contains(&0));
        assert!(!b.contains(&3));
    }

    #[test]
    fn polytope_excess_detects_violation() {
        let m = Matroid::laminar(3, 2);
        let mut x = FractionalPoint::zeros(3, 2);
        x.set(0, 0, 0.6);
        x.set(1, 0, 0.6);
        assert!((x.polytope_excess(&m) - 0.2).abs() < 1e-12);
        x.set(1, 0, 0.4);
        assert!(x.polytope_excess(&m) <= 0.0);
    }
}
