use num_bigint::BigInt;
use thiserror::Error;

use crate::fibergraph::{ComponentId, ReducedGraph};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants are grouped by the stage that raises them. Document errors
/// (`Parse`, `Schema`, `Invariant`) carry a location string so the CLI can
/// point at the offending line or field.
#[derive(Debug, Error)]
pub enum Error {
    // graph construction and intersection theory
    #[error("unknown component `{0}`")]
    UnknownComponent(ComponentId),
    #[error("duplicate component id `{0}`")]
    DuplicateComponent(ComponentId),
    #[error("component `{0}` meets itself; self-loops are not allowed in an SNC fiber")]
    SelfLoop(ComponentId),
    #[error("component `{id}` has invalid data: {reason}")]
    InvalidComponent { id: ComponentId, reason: String },
    #[error("graph has no components")]
    EmptyGraph,
    #[error("mult({id}) = {mult} does not divide the neighbour sum {sum}")]
    NonIntegralSelfIntersection {
        id: ComponentId,
        mult: BigInt,
        sum: BigInt,
    },
    #[error("self-intersection is undefined on a single-component fiber (the fiber is numerically trivial)")]
    SelfIntersectionUndefined,
    #[error("adjunction gives a non-integral or negative genus ({0})")]
    NonIntegralGenus(String),
    #[error("graph is not a valid SNC fiber: {0}")]
    InvalidGraph(String),

    // local model
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("chain multiplicity μ_{index} = {value} is not an integer")]
    NonIntegralMultiplicity { index: usize, value: String },
    #[error("chain multiplicity μ_{index} = {value} is not positive")]
    NonPositiveMultiplicity { index: usize, value: String },
    #[error("residue characteristic {p} divides both branch multiplicities {a} and {b}")]
    TameAssumptionViolated { p: u64, a: BigInt, b: BigInt },
    #[error("residue characteristic {p} divides the base-change degree {n}")]
    WildDegree { p: u64, n: BigInt },

    // Saito's criterion
    #[error("no principal components (genus < 2 or invalid input)")]
    NoPrincipalComponents,
    #[error("Saito's criterion fails at: {0}")]
    SaitoViolated(String),
    #[error("maximal chain {0} is a loop or meets no principal component")]
    ChainCondition(String),

    // base change
    #[error("chain gcds differ: {0:?}")]
    InconsistentChain(Vec<BigInt>),
    #[error("inconsistent splitting: {0}")]
    InconsistentSplitting(String),
    #[error("base change produced a disconnected fiber")]
    DisconnectedResult,
    #[error("no splitting plan is consistent with the graph")]
    EmptyResult,
    #[error("value {0} is too large to materialize as a component count")]
    TooLarge(BigInt),

    // contraction
    #[error("component `{id}` is not contractible: {reason}")]
    NotContractible { id: ComponentId, reason: String },
    #[error("contraction precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("genus {0} < 2: stable model is out of scope")]
    GenusTooSmall(BigInt),

    // pipeline
    #[error("{} consistent splitting plans give non-isomorphic stable graphs", .0.len())]
    AmbiguousSplitting(Vec<ReducedGraph>),
    #[error("stage `{stage}` failed check `{check}`")]
    StageCheckFailed { stage: String, check: String },

    // documents
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("invariant error at `{path}`: {message}")]
    Invariant { path: String, message: String },
}
