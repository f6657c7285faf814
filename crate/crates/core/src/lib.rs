//! Locating hidden infected nodes from a partial snapshot of an SI cascade.
//!
//! The pipeline: simulate a cascade ([`cascade`]), observe a random subset
//! of nodes, prune provably susceptible nodes ([`reduction`]), score the rest
//! by infection betweenness ([`ib`]), build per-node [`features`], train
//! [`classifiers`] on labeled runs and score them ([`eval`]).

pub mod cascade;
pub mod classifiers;
pub mod cli;
pub mod eval;
pub mod features;
pub mod graph;
pub mod ib;
pub mod reduction;
pub mod rng;

pub use cascade::{observe, simulate_si, Cascade, NodeState, Observation};
pub use graph::{Graph, GraphModel};
pub use reduction::{reduce_property1, ReducedGraph};
