//! Planted-partition commuter cities with known ground truth.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::geo::Hemisphere;
use crate::graph::{NodeId, OdRecord};
use crate::rng;

#[derive(Clone, Debug, PartialEq)]
pub struct SynthSpec {
    pub communities: usize,
    pub nodes_per_community: usize,
    /// Probability of a flow between two nodes of the same block.
    pub p_in: f64,
    /// Probability of a flow between nodes of different blocks.
    pub p_out: f64,
    /// Mean commuter count per flow; counts are `1 + Poisson(mean - 1)`.
    pub mean_count: f64,
    /// Block centres in UTM metres. `None` places them on a ring.
    pub centers: Option<Vec<(f64, f64)>>,
    pub ring_center: (f64, f64),
    pub ring_radius_m: f64,
    /// Standard deviation of node positions around their block centre.
    pub spread_m: f64,
    pub zone: u8,
    pub hemisphere: Hemisphere,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            communities: 4,
            nodes_per_community: 50,
            p_in: 0.3,
            p_out: 0.01,
            mean_count: 2.0,
            centers: None,
            // around central Santiago, zone 19 S
            ring_center: (346_800.0, 6_296_800.0),
            ring_radius_m: 12_000.0,
            spread_m: 2_500.0,
            zone: 19,
            hemisphere: Hemisphere::South,
            seed: 0,
        }
    }
}

impl SynthSpec {
    fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidArgument(msg));
        if self.communities == 0 || self.nodes_per_community == 0 {
            return bad("communities and nodes per community must be at least 1".into());
        }
        for (name, p) in [("p_in", self.p_in), ("p_out", self.p_out)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must be a probability, got {p}"));
            }
        }
        if !(self.mean_count.is_finite() && self.mean_count >= 1.0) {
            return bad(format!("mean count must be at least 1, got {}", self.mean_count));
        }
        if !(self.spread_m.is_finite() && self.spread_m >= 0.0) {
            return bad(format!("spread must be non-negative, got {}", self.spread_m));
        }
        if let Some(c) = &self.centers {
            if c.len() != self.communities {
                return bad(format!("{} centres for {} communities", c.len(), self.communities));
            }
        }
        Ok(())
    }

    fn block_centers(&self) -> Vec<(f64, f64)> {
        if let Some(c) = &self.centers {
            return c.clone();
        }
        let k = self.communities as f64;
        (0..self.communities)
            .map(|b| {
                let t = 2.0 * core::f64::consts::PI * b as f64 / k;
                // radius grows with the block index so distances to the
                // centre differ between blocks
                let r = self.ring_radius_m * (0.5 + 0.5 * (b + 1) as f64 / k);
                (
                    self.ring_center.0 + r * libm::cos(t),
                    self.ring_center.1 + r * libm::sin(t),
                )
            })
            .collect()
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SynthSite {
    pub id: NodeId,
    pub easting: f64,
    pub northing: f64,
    pub block: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthCity {
    pub records: Vec<OdRecord>,
    pub sites: Vec<SynthSite>,
    pub planted: Partition,
}

/// Draw a city. Node `i` belongs to block `i / nodes_per_community`; every
/// ordered pair of distinct nodes gets a flow with probability `p_in` or
/// `p_out`.
pub fn generate(spec: &SynthSpec) -> Result<SynthCity> {
    spec.validate()?;
    let mut rng = rng::rng_from(rng::derive_seed(spec.seed, "synth", 0));
    let n = spec.communities * spec.nodes_per_community;
    let block = |i: usize| i / spec.nodes_per_community;
    let extra = spec.mean_count - 1.0;
    let poisson = if extra > 0.0 {
        Some(Poisson::new(extra).map_err(|e| Error::InvalidArgument(format!("{e}")))?)
    } else {
        None
    };

    let mut records = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let p = if block(i) == block(j) { spec.p_in } else { spec.p_out };
            if rng.random::<f64>() < p {
                let count = 1 + poisson.as_ref().map_or(0, |d| d.sample(&mut rng) as u64);
                records.push(OdRecord::new(i as u64, j as u64, count));
            }
        }
    }

    let centers = spec.block_centers();
    let jitter = Normal::new(0.0, spec.spread_m).map_err(|e| Error::InvalidArgument(format!("{e}")))?;
    let sites = (0..n)
        .map(|i| {
            let (cx, cy) = centers[block(i)];
            SynthSite {
                id: NodeId(i as u64),
                easting: cx + jitter.sample(&mut rng),
                northing: cy + jitter.sample(&mut rng),
                block: block(i),
            }
        })
        .collect();

    let nodes: Vec<NodeId> = (0..n as u64).map(NodeId).collect();
    let labels: Vec<usize> = (0..n).map(block).collect();
    let planted = Partition::from_assignment(nodes, &labels)?;
    Ok(SynthCity {
        records,
        sites,
        planted,
    })
}
