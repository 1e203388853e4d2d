use thiserror::Error;

/// Everything that can go wrong while building instances or running solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("position weights are not weakly decreasing at position {position}")]
    WeightsNotDecreasing { position: usize },
    #[error("position weight {position} is negative or not finite ({value})")]
    InvalidWeight { position: usize, value: f64 },
    #[error("position weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },
    #[error("no position weights given")]
    EmptyWeights,
    #[error("{owner}: mass {sum} exceeds 1")]
    MassExceedsOne { owner: String, sum: f64 },
    #[error("{owner}: mass {sum} is not a full distribution")]
    NotFull { owner: String, sum: f64 },
    #[error("{owner}: entry for genre {genre} is negative or not finite ({value})")]
    InvalidMass { owner: String, genre: String, value: f64 },
    #[error("{owner}: unknown genre {genre}")]
    UnknownGenre { owner: String, genre: String },
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("item {0} is not a point mass on a single genre (discrete mode)")]
    NotPointMass(String),
    #[error("unknown item {0}")]
    UnknownItem(String),
    #[error("element index {index} out of range for universe of size {size}")]
    ElementOutOfRange { index: usize, size: usize },
    #[error("sequence of length {len} exceeds list length {k}")]
    SequenceTooLong { len: usize, k: usize },
    #[error("empty genre set")]
    EmptyGenres,
    #[error("instance has no items")]
    EmptyItems,
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("derivative of h undefined at {at}")]
    UndefinedDerivative { at: f64 },
    #[error("f-divergence {0} is unbounded (f(t)/t diverges as t grows)")]
    UnboundedDivergence(String),
    #[error("search space of {size} sequences exceeds the limit {limit}")]
    SearchSpaceTooLarge { size: f64, limit: f64 },
    #[error("universe of {size} elements exhausted before reaching length {k}")]
    UniverseExhausted { size: usize, k: usize },
    #[error("pair (item {item}, slot {slot}) outside the {items}x{slots} ground set")]
    InvalidPair { item: usize, slot: usize, items: usize, slots: usize },
    #[error("set is not a basis: {0}")]
    NotABasis(String),
    #[error("point violates the matroid polytope by {excess}")]
    OutsidePolytope { excess: f64 },
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("unknown {kind}: {name}")]
    UnknownName { kind: &'static str, name: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
