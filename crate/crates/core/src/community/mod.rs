//! Community detection: partitions, modularity with resolution, Louvain,
//! resolution sweeps and partition comparison.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

mod compare;
mod louvain;
mod modularity;
mod sweep;

pub use compare::{
    adjusted_rand_index, compare_partitions, max_matching, normalized_mutual_information,
    Comparison, ContingencyTable,
};
pub use louvain::{louvain, LouvainConfig, LouvainResult, Objective, VisitOrder};
pub use modularity::modularity;
pub use sweep::{
    assemble_table, resolution_sweep, run_config, run_seed, summarize_runs, sweep_row, SweepRow,
    SweepTable,
};

/// Resolution in the Gephi convention: larger values give fewer, larger
/// communities. Internally the null term is weighted by `gamma = 1 / r`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct QualityParams {
    resolution: f64,
}

impl QualityParams {
    pub fn new(resolution: f64) -> Result<Self> {
        if resolution.is_finite() && resolution > 0.0 {
            Ok(QualityParams { resolution })
        } else {
            Err(Error::InvalidResolution(resolution))
        }
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn gamma(&self) -> f64 {
        1.0 / self.resolution
    }
}

impl Default for QualityParams {
    fn default() -> Self {
        QualityParams { resolution: 1.0 }
    }
}

/// Assignment of every node in a universe to exactly one community.
///
/// Community indices are dense, `0..community_count()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    nodes: Vec<NodeId>,
    assignment: Vec<usize>,
    count: usize,
}

impl Partition {
    /// Build from `(node, label)` pairs. Distinct labels are numbered in
    /// their sort order, so integer labels keep their relative order and
    /// `a..f` become `0..5`.
    pub fn from_labels<L: Ord + Clone>(
        pairs: impl IntoIterator<Item = (NodeId, L)>,
    ) -> Result<Self> {
        let mut pairs: Vec<(NodeId, L)> = pairs.into_iter().collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::PartitionMismatch(format!(
                "node {} assigned twice",
                w[0].0
            )));
        }
        let mut labels: BTreeMap<L, usize> = pairs.iter().map(|(_, l)| (l.clone(), 0)).collect();
        for (i, v) in labels.values_mut().enumerate() {
            *v = i;
        }
        let count = labels.len();
        let assignment = pairs.iter().map(|(_, l)| labels[l]).collect();
        let nodes = pairs.into_iter().map(|(n, _)| n).collect();
        Ok(Partition {
            nodes,
            assignment,
            count,
        })
    }

    /// Build from raw labels aligned with `nodes` (ascending ids). Labels
    /// are renumbered by first appearance, so community 0 holds node 0.
    pub fn from_assignment(nodes: Vec<NodeId>, labels: &[usize]) -> Result<Self> {
        if nodes.len() != labels.len() {
            return Err(Error::LengthMismatch {
                left: nodes.len(),
                right: labels.len(),
            });
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::PartitionMismatch(
                "node ids must be strictly ascending".into(),
            ));
        }
        let (assignment, count) = renumber(labels);
        Ok(Partition {
            nodes,
            assignment,
            count,
        })
    }

    pub fn singletons(nodes: &[NodeId]) -> Self {
        Partition {
            nodes: nodes.to_vec(),
            assignment: (0..nodes.len()).collect(),
            count: nodes.len(),
        }
    }

    pub fn whole(nodes: &[NodeId]) -> Self {
        Partition {
            nodes: nodes.to_vec(),
            assignment: vec![0; nodes.len()],
            count: usize::from(!nodes.is_empty()),
        }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Community index per node, aligned with [`Partition::nodes`].
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn community_count(&self) -> usize {
        self.count
    }

    pub fn community_of(&self, id: NodeId) -> Option<usize> {
        self.nodes
            .binary_search(&id)
            .ok()
            .map(|i| self.assignment[i])
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.count];
        for &c in &self.assignment {
            s[c] += 1;
        }
        s
    }

    /// Members of every community, in ascending node order.
    pub fn members(&self) -> Vec<Vec<NodeId>> {
        let mut m = vec![Vec::new(); self.count];
        for (&n, &c) in self.nodes.iter().zip(&self.assignment) {
            m[c].push(n);
        }
        m
    }

    /// Apply a label permutation: community `c` becomes `perm[c]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.count];
        if perm.len() != self.count || perm.iter().any(|&p| p >= self.count || core::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidArgument("not a permutation of the community labels".into()));
        }
        Ok(Partition {
            nodes: self.nodes.clone(),
            assignment: self.assignment.iter().map(|&c| perm[c]).collect(),
            count: self.count,
        })
    }

    pub(crate) fn check_covers(&self, g: &Graph) -> Result<()> {
        if self.nodes.as_slice() == g.nodes() {
            Ok(())
        } else {
            Err(Error::PartitionMismatch(format!(
                "partition has {} nodes, graph has {}",
                self.nodes.len(),
                g.node_count()
            )))
        }
    }

    /// Per-community totals recomputed from the graph.
    pub fn totals(&self, g: &Graph) -> Result<CommunityTotals> {
        self.check_covers(g)?;
        let k = self.count;
        let mut t = CommunityTotals {
            internal: vec![0.0; k],
            out_strength: vec![0.0; k],
            in_strength: vec![0.0; k],
        };
        for (i, &c) in self.assignment.iter().enumerate() {
            t.out_strength[c] += g.out_strength(i);
            t.in_strength[c] += g.in_strength(i);
        }
        for e in g.edges() {
            let c = self.assignment[e.source];
            if c == self.assignment[e.target] {
                // undirected: both orientations of the double sum
                t.internal[c] += if g.is_directed() { e.weight } else { 2.0 * e.weight };
            }
        }
        Ok(t)
    }
}

/// Bookkeeping totals of a partition.
///
/// Undirected: `internal[c] = sum_{i,j in c} A_ij` over both orientations,
/// so an internal edge of weight `w` (self-loops included) adds `2w`, and
/// `out_strength == in_strength == d_c`. Directed: `internal[c]` is the
/// weight of arcs with both ends in `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommunityTotals {
    pub internal: Vec<f64>,
    pub out_strength: Vec<f64>,
    pub in_strength: Vec<f64>,
}

pub(crate) fn renumber(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    let assignment = labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect();
    (assignment, map.len())
}
