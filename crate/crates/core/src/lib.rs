//! Commuter mobility network analysis.
//!
//! Builds home→work flow graphs from origin–destination records, detects
//! communities with resolution-parameterised Louvain, scores nodes by
//! betweenness and eigenvector centrality, relates those scores to distance
//! from the city centre, and classifies community pairs as segregated
//! against a randomised null model.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! the thread-parallel drivers live in the `subcity` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod centrality;
pub mod community;
pub mod error;
pub mod geo;
pub mod graph;
pub mod rng;
pub mod segregation;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId, OdRecord};
