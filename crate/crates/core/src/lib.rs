pub mod arith;
pub mod basechange;
pub mod contract;
pub mod document;
pub mod dot;
pub mod error;
pub mod fibergraph;
mod iso;
mod json;
pub mod localmodel;
pub mod pipeline;
pub mod saito;

pub use basechange::{search_splittings, transform, SplittingPlan};
pub use contract::{contract_chains, contract_component, to_stable, ContractionTrace};
pub use document::{parse, GraphDocument};
pub use dot::emit_dot;
pub use error::{Error, Result};
pub use fibergraph::{validate, Component, ComponentId, Edge, FiberGraph, ReducedGraph};
pub use pipeline::{probe_minimality, run, PipelineReport};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/fiber-graphs.md")]
    struct FiberGraphs;
    #[doc = include_str!("../../../book/src/local-model.md")]
    struct LocalModel;
    #[doc = include_str!("../../../book/src/saito.md")]
    struct Saito;
    #[doc = include_str!("../../../book/src/base-change.md")]
    struct BaseChange;
    #[doc = include_str!("../../../book/src/contraction.md")]
    struct Contraction;
    #[doc = include_str!("../../../book/src/pipeline.md")]
    struct Pipeline;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
    #[doc = include_str!("../../../README.md")]
    struct Readme;
}
