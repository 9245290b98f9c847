//! Constructive probabilistic hypergraph containers.
//!
//! The crate computes Janson quantities for random m-subsets of a k-uniform
//! hypergraph, builds containers from small fingerprints via a degree
//! cascade, extracts fingerprints with saturating sets and greedy deletion,
//! and checks all of it exhaustively on small instances.

pub mod cli;
pub mod containers;
pub mod experiments;
pub mod generators;
pub mod hypergraph;
pub mod janson;
pub mod removal;
pub mod seeds;

pub use hypergraph::{Hypergraph, HypergraphError, VertexSet};
