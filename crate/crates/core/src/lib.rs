//! Calibrated recommendation lists under position-decaying attention.

pub mod algorithm;
pub mod dist;
pub mod error;
pub mod file;
pub mod greedy;
pub mod instance;
pub mod matroid;
pub mod measure;
pub mod objective;
pub mod oracle;
pub mod repro;

pub use dist::{PositionWeights, Subdistribution};
pub use error::{Error, Result};
pub use instance::{Instance, Item, Mode, Universe};
pub use measure::{ConcaveFamily, FDivergence, Overlap, OverlapMeasure};
pub use objective::{ItemPositionSet, Sequence};
pub use algorithm::{run, Outcome, Solver};
pub use file::{instance_to_json, parse_instance, InstanceFile};
pub use greedy::{best_length_solve, discrete_greedy, greedy_sequence, GreedyTrace};
pub use matroid::{ContinuousParams, Matroid, Solution};
pub use oracle::{exhaustive_opt, CheckReport, RatioReport};
