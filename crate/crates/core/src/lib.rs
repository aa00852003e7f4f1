//! A query-centric, vertex-centric graph engine.
//!
//! Applications describe how a single generic query is answered by a
//! Pregel-style vertex program. The [`engine::Engine`] multiplexes many
//! in-flight queries onto one sequence of *super-rounds*: in each round every
//! admitted query advances by exactly one of its own supersteps, and the
//! messages of all queries are exchanged behind a single barrier.
//!
//! Per-vertex query state is allocated lazily, only for vertices a query
//! actually touches, and released as soon as the query has reported its
//! answer.
//!
//! Five query families ship with the crate: point-to-point shortest paths
//! ([`ppsp`]), XML keyword search ([`xml`]), terrain shortest paths
//! ([`terrain`]), DAG reachability ([`reach`]) and graph keyword search
//! ([`gkws`]).

pub mod engine;
pub mod error;
pub mod gkws;
pub mod graph_io;
pub mod model;
pub mod ppsp;
pub mod program;
pub mod reach;
pub mod synth;
pub mod terrain;
pub mod text;
pub mod xml;

pub use engine::{
    Engine, EngineConfig, MissingTarget, QueryOutcome, QueryStats, QuerySubmitter,
    SuperRoundReport, TransportKind,
};
pub use error::{EngineError, QueryError};
pub use model::{QueryId, VertexData, VertexId};
pub use program::{
    Activation, Aggregator, Combiner, Context, Finish, NoAggregator, VertexProgram, WorkerProgram,
};
