//! Random-walk exploration of undirected graphs: budgeted and baseline
//! walk strategies, Monte-Carlo estimation of partial cover time, exact
//! small-graph oracles, budget-probability analysis, and the optimal
//! stopping machinery behind the secretary walk.
//!
//! # Layout
//!
//! - [`graph`]: compact immutable adjacency structure and edge-list IO
//! - [`generate`]: named graph families for experiments and tests
//! - [`strategy`]: strategy taxonomy and exact transition rows
//! - [`walk`]: walk state and per-strategy step samplers
//! - [`estimator`]: Monte-Carlo partial-cover-time curves
//! - [`oracle`]: exact expectations on small graphs
//! - [`budget`]: closed-form and empirical budget success probabilities
//! - [`stopping`]: secretary-rule analysis and the secretary walk
//! - [`stats`]: descriptive graph statistics
//! - [`csv`], [`svg`]: deterministic renderings of results
//! - [`rng`]: deterministic seed derivation
//!
//! # Determinism
//!
//! Every randomized routine takes either an explicit RNG or a master
//! seed from which per-trial generators are derived with
//! [`rng::derive_seed`]. Runs with equal seeds produce identical output
//! byte for byte, independent of thread count.

#![forbid(unsafe_code)]
#![deny(missing_docs)]

pub mod budget;
pub mod csv;
pub mod error;
pub mod estimator;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod rng;
pub mod stats;
pub mod stopping;
pub mod strategy;
pub mod svg;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId};
pub use strategy::StrategySpec;
pub use walk::WalkState;
