//! Named solvers behind one entry point.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::greedy::{discrete_greedy, greedy_sequence};
use crate::instance::Instance;
use crate::matroid::{solve_distributional, solve_with_repeats, ContinuousParams};
use crate::measure::OverlapMeasure;
use crate::objective::{seq_objective, Sequence, SequenceObjective};
use crate::oracle::exhaustive_opt;

#[derive(Debug, Clone)]
pub enum Solver {
    Greedy { measure: OverlapMeasure, allow_repeats: bool },
    /// Closed-form greedy for discrete instances (squared Hellinger).
    DiscreteGreedy,
    Distributional { measure: OverlapMeasure, params: ContinuousParams },
    WithRepeats { measure: OverlapMeasure, params: ContinuousParams },
    Exhaustive { measure: OverlapMeasure, allow_repeats: bool },
}

pub const SOLVER_NAMES: [&str; 5] = ["greedy", "discrete-greedy", "distributional", "with-repeats", "exhaustive"];

impl Solver {
    /// Builds a solver from its CLI name.
    pub fn from_name(name: &str, measure: OverlapMeasure, allow_repeats: bool, params: ContinuousParams) -> Result<Self> {
        Ok(match name {
            "greedy" => Solver::Greedy { measure, allow_repeats },
            "discrete-greedy" => Solver::DiscreteGreedy,
            "distributional" => Solver::Distributional { measure, params },
            "with-repeats" => Solver::WithRepeats { measure, params },
            "exhaustive" => Solver::Exhaustive { measure, allow_repeats },
            other => return Err(Error::UnknownName { kind: "algorithm", name: other.to_string() }),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Solver::Greedy { .. } => "greedy",
            Solver::DiscreteGreedy => "discrete-greedy",
            Solver::Distributional { .. } => "distributional",
            Solver::WithRepeats { .. } => "with-repeats",
            Solver::Exhaustive { .. } => "exhaustive",
        }
    }

    /// The measure the solver optimizes.
    pub fn measure(&self) -> OverlapMeasure {
        match self {
            Solver::Greedy { measure, .. }
            | Solver::Distributional { measure, .. }
            | Solver::WithRepeats { measure, .. }
            | Solver::Exhaustive { measure, .. } => measure.clone(),
            Solver::DiscreteGreedy => OverlapMeasure::HellingerSquared,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub sequence: Sequence,
    pub value: f64,
    /// `G(π_1..π_j) − G(π_1..π_{j−1})` for each slot.
    pub gains: Vec<f64>,
}

/// Runs `solver` on `inst`; the value is always re-evaluated with
/// [`seq_objective`] on the returned list.
pub fn run(inst: &Instance, solver: &Solver) -> Result<Outcome> {
    let sequence = match solver {
        Solver::Greedy { measure, allow_repeats } => {
            let universe = inst.default_universe();
            let obj = SequenceObjective::new(measure, inst.target_dense(), inst.weights(), &universe)?;
            greedy_sequence(|s| obj.value(s), universe.len(), inst.k(), *allow_repeats)?.0
        }
        Solver::DiscreteGreedy => discrete_greedy(inst)?.0,
        Solver::Distributional { measure, params } => solve_distributional(inst, measure, *params)?.sequence,
        Solver::WithRepeats { measure, params } => solve_with_repeats(inst, measure, *params)?.sequence,
        Solver::Exhaustive { measure, allow_repeats } => exhaustive_opt(inst, measure, *allow_repeats)?.0,
    };
    let measure = solver.measure();
    let mut gains = Vec::with_capacity(sequence.len());
    let mut prev = seq_objective(&measure, &[], inst)?;
    for j in 1..=sequence.len() {
        let v = seq_objective(&measure, &sequence[..j], inst)?;
        gains.push(v - prev);
        prev = v;
    }
    Ok(Outcome { value: prev, sequence, gains })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::two_genre_example;

    #[test]
    fn gains_sum_to_value_shift() {
        let inst = two_genre_example();
        let g = OverlapMeasure::HellingerSquared;
        let out = run(&inst, &Solver::Greedy { measure: g.clone(), allow_repeats: false }).unwrap();
        let empty = seq_objective(&g, &[], &inst).unwrap();
        assert!((out.gains.iter().sum::<f64>() + empty - out.value).abs() < 1e-12);
    }

    #[test]
    fn power_half_matches_hellinger() {
        let inst = two_genre_example();
        let a = run(&inst, &Solver::Greedy { measure: OverlapMeasure::HellingerSquared, allow_repeats: false }).unwrap();
        let b = run(&inst, &Solver::Greedy { measure: OverlapMeasure::power(0.5).unwrap(), allow_repeats: false }).unwrap();
        assert_eq!(a.sequence, b.sequence);
        assert!((a.value - b.value).abs() < 1e-12);
    }

    #[test]
    fn unknown_name() {
        let r = Solver::from_name("nope", OverlapMeasure::HellingerSquared, false, ContinuousParams::default());
        assert!(matches!(r, Err(Error::UnknownName { .. })));
    }
}
