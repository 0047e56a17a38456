use alloc::string::String;

use crate::graph::NodeId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the analysis core.
///
/// [`Error::is_input`] separates malformed inputs from numerical failures,
/// which the CLI maps onto different exit codes.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("record {index}: commuter count must be at least 1")]
    ZeroCount { index: usize },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("graph has no edges")]
    NoEdges,

    #[error("partition does not cover the graph's node set: {0}")]
    PartitionMismatch(String),

    #[error("node {0} is not assigned to any community")]
    UnassignedNode(NodeId),

    #[error("resolution must be a positive finite number, got {0}")]
    InvalidResolution(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("coordinate out of range: {0}")]
    CoordinateRange(String),

    #[error("missing coordinates for node {0}")]
    MissingCoordinates(NodeId),

    #[error("correlation undefined: {0} has zero variance")]
    ZeroVariance(&'static str),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("source community {0} has no outgoing flow")]
    EmptyRow(usize),

    #[error("power iteration did not converge after {iterations} iterations (last change {last_delta:e}); {hint}")]
    NoConvergence {
        iterations: usize,
        last_delta: f64,
        hint: &'static str,
    },
}

impl Error {
    /// True when the error stems from bad input rather than a numerical failure.
    pub fn is_input(&self) -> bool {
        !matches!(
            self,
            Error::NoConvergence { .. } | Error::ZeroVariance(_) | Error::NoEdges
        )
    }
}
