//! Node centrality, per-community summaries and correlation with distance.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::NodeId;

mod betweenness;
mod correlation;
mod eigenvector;
mod grouped;

pub use betweenness::{
    betweenness, normalize_betweenness, BrandesWorkspace, EdgeLength,
};
pub use correlation::{centrality_vs_distance, pearson, DistanceCorrelation, ScatterRow};
pub use eigenvector::{eigenvector, eigenvector_with, in_edge_product, EigenConfig};
pub use grouped::{group_stats, GroupStats};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Measure {
    Betweenness,
    Eigenvector,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Betweenness => "betweenness",
            Measure::Eigenvector => "eigenvector",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Scores of one measure, aligned with `nodes` (ascending ids).
#[derive(Clone, Debug, PartialEq)]
pub struct CentralityResult {
    pub measure: Measure,
    pub nodes: Vec<NodeId>,
    pub scores: Vec<f64>,
    pub normalization: String,
    /// Rayleigh estimate of the dominant eigenvalue (eigenvector only).
    pub eigenvalue: Option<f64>,
    pub iterations: Option<usize>,
    /// Set when the scores are degenerate, e.g. betweenness with `n < 3`.
    pub warning: Option<String>,
}

impl CentralityResult {
    pub fn score_of(&self, id: NodeId) -> Option<f64> {
        self.nodes.binary_search(&id).ok().map(|i| self.scores[i])
    }
}
