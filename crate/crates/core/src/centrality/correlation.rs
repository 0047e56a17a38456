use alloc::vec::Vec;

use crate::centrality::CentralityResult;
use crate::error::{Error, Result};
use crate::geo::GeoTable;
use crate::graph::NodeId;

/// Sample Pearson correlation, clamped to `[-1, 1]`.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InvalidArgument("correlation needs at least two samples".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance("first variable"));
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance("second variable"));
    }
    Ok((sxy / (libm::sqrt(sxx) * libm::sqrt(syy))).clamp(-1.0, 1.0))
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ScatterRow {
    pub id: NodeId,
    pub distance_km: f64,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceCorrelation {
    /// Sorted by id.
    pub rows: Vec<ScatterRow>,
    /// Distance vs score; may be undefined while the rows are still valid.
    pub correlation: Result<f64>,
}

impl DistanceCorrelation {
    /// `[[1, r], [r, 1]]` with the distance first.
    pub fn matrix(&self) -> Result<[[f64; 2]; 2]> {
        let r = self.correlation.clone()?;
        Ok([[1.0, r], [r, 1.0]])
    }
}

/// Pair every node's distance to the centre with its score.
pub fn centrality_vs_distance(
    scores: &CentralityResult,
    geo: &GeoTable,
) -> Result<DistanceCorrelation> {
    if scores.nodes != geo.nodes {
        return Err(Error::PartitionMismatch(
            "score and location node sets differ".into(),
        ));
    }
    let rows: Vec<ScatterRow> = scores
        .nodes
        .iter()
        .zip(&geo.distances)
        .zip(&scores.scores)
        .map(|((&id, &distance_km), &score)| ScatterRow {
            id,
            distance_km,
            score,
        })
        .collect();
    let correlation = pearson(&geo.distances, &scores.scores);
    Ok(DistanceCorrelation { rows, correlation })
}
