//! End-to-end solvers built on continuous greedy and swap rounding.

use serde::{Deserialize, Serialize};

use super::{continuous_greedy, swap_round, EarliestPosition, EveryOccurrence, Matroid};
use crate::error::{Error, Result};
use crate::instance::{Instance, Mode};
use crate::measure::{Overlap, OverlapMeasure};
use crate::objective::{seq_objective, ItemPositionSet, Sequence};

/// Continuous greedy settings. The rounding step draws from `seed + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuousParams {
    pub steps: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for ContinuousParams {
    fn default() -> Self {
        ContinuousParams { steps: 100, samples: 200, seed: 42 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub sequence: Sequence,
    pub value: f64,
}

/// Turns a laminar basis into a repeat-free list: items sorted by earliest
/// slot (ties by index), so each lands no later than that slot. Lists with
/// fewer than `k` distinct items are padded with the lowest unused indices.
pub fn set_to_sequence(set: &ItemPositionSet, inst: &Instance) -> Result<Sequence> {
    let (items, k) = (inst.items().len(), inst.k());
    set.check_bounds(items, k)?;
    let m = Matroid::laminar(items, k);
    if !m.is_basis(set) {
        return Err(Error::NotABasis(format!("{set} is not a basis of the laminar matroid")));
    }
    let mut placed: Vec<(usize, usize)> = set
        .earliest_slots(items)
        .into_iter()
        .enumerate()
        .filter_map(|(i, l)| l.map(|l| (l, i)))
        .collect();
    placed.sort_unstable();
    let mut seq: Vec<usize> = placed.into_iter().map(|(_, i)| i).collect();
    let mut used = vec![false; items];
    seq.iter().for_each(|&i| used[i] = true);
    seq.extend((0..items).filter(|&i| !used[i]).take(k.saturating_sub(seq.len())));
    Ok(Sequence(seq))
}

/// Repeat-free lists over catalog items: continuous greedy on `F_G` under
/// the laminar matroid, swap rounding, then [`set_to_sequence`].
pub fn solve_distributional(inst: &Instance, measure: &OverlapMeasure, params: ContinuousParams) -> Result<Solution> {
    if inst.mode() != Mode::Distributional {
        return Err(Error::ModeMismatch("solve_distributional needs a distributional instance".into()));
    }
    let (items, k) = (inst.items().len(), inst.k());
    if items < k {
        return Err(Error::UniverseExhausted { size: items, k });
    }
    measure.check_target(inst.target_dense())?;
    let f = EarliestPosition {
        measure,
        target: inst.target_dense(),
        weights: inst.weights(),
        rows: inst.item_rows(),
    };
    let m = Matroid::laminar(items, k);
    let x = continuous_greedy(&f, &m, params.steps, params.samples, params.seed);
    let basis = swap_round(&m, &x, params.seed.wrapping_add(1))?;
    let sequence = set_to_sequence(&basis, inst)?;
    let value = seq_objective(measure, &sequence, inst)?;
    Ok(Solution { sequence, value })
}

/// Lists with repeats over the default universe: continuous greedy on `F̂_G`
/// under the partition matroid; slot `j` takes the item of its pair.
pub fn solve_with_repeats(inst: &Instance, measure: &OverlapMeasure, params: ContinuousParams) -> Result<Solution> {
    let universe = inst.default_universe();
    let k = inst.k();
    measure.check_target(inst.target_dense())?;
    let f = EveryOccurrence {
        measure,
        target: inst.target_dense(),
        weights: inst.weights(),
        rows: &universe.rows,
    };
    let m = Matroid::partition(universe.len(), k);
    let x = continuous_greedy(&f, &m, params.steps, params.samples, params.seed);
    let basis = swap_round(&m, &x, params.seed.wrapping_add(1))?;
    let mut seq = vec![0; k];
    for (i, j) in basis.iter() {
        seq[j] = i;
    }
    let sequence = Sequence(seq);
    let value = seq_objective(measure, &sequence, inst)?;
    Ok(Solution { sequence, value })
}
