//! Immutable weighted commuter graphs.
//!
//! A [`Graph`] is built once from origin–destination records and never
//! mutated. Parallel records are aggregated on construction, node order is
//! ascending by id, and all derived tables index nodes by that order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Tower identifier.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for NodeId {
    fn from(v: u64) -> Self {
        NodeId(v)
    }
}

/// One home→work observation, `count` commuters strong.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct OdRecord {
    pub source: NodeId,
    pub target: NodeId,
    pub count: u64,
}

impl OdRecord {
    pub fn new(source: impl Into<NodeId>, target: impl Into<NodeId>, count: u64) -> Self {
        OdRecord {
            source: source.into(),
            target: target.into(),
            count,
        }
    }
}

/// A distinct aggregated edge between node indices.
///
/// Undirected edges are stored with `source <= target`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

/// Which of the four network variants to build.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Variant {
    pub directed: bool,
    pub weighted: bool,
}

impl Variant {
    pub const DIRECTED_WEIGHTED: Variant = Variant {
        directed: true,
        weighted: true,
    };
    pub const UNDIRECTED_WEIGHTED: Variant = Variant {
        directed: false,
        weighted: true,
    };

    pub fn new(directed: bool, weighted: bool) -> Self {
        Variant { directed, weighted }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = if self.directed { "directed" } else { "undirected" };
        let w = if self.weighted { "weighted" } else { "unweighted" };
        write!(f, "{d} {w}")
    }
}

/// Per-node strengths.
#[derive(Clone, Debug, PartialEq)]
pub enum Strengths {
    /// `k_i`, self-loops counted twice. Sums to `2m`.
    Undirected(Vec<f64>),
    /// `(k_out, k_in)`, each summing to `m`.
    Directed { out: Vec<f64>, inc: Vec<f64> },
}

#[derive(Clone, Debug)]
pub struct Graph {
    variant: Variant,
    nodes: Vec<NodeId>,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<(usize, f64)>>,
    in_adj: Vec<Vec<(usize, f64)>>,
    out_strength: Vec<f64>,
    in_strength: Vec<f64>,
    total_weight: f64,
}

/// Aggregate records into a graph of the requested variant.
pub fn build_graph(records: &[OdRecord], directed: bool, weighted: bool) -> Result<Graph> {
    Graph::from_records(records, core::iter::empty(), Variant::new(directed, weighted))
}

impl Graph {
    /// Aggregate records, additionally registering `extra_nodes` (which may
    /// stay isolated).
    pub fn from_records(
        records: &[OdRecord],
        extra_nodes: impl IntoIterator<Item = NodeId>,
        variant: Variant,
    ) -> Result<Graph> {
        let mut weighted = Vec::with_capacity(records.len());
        for (index, r) in records.iter().enumerate() {
            if r.count == 0 {
                return Err(Error::ZeroCount { index });
            }
            weighted.push((r.source, r.target, r.count as f64));
        }
        Self::assemble(&weighted, extra_nodes, variant)
    }

    /// Build a weighted graph directly from real-valued edges. Parallel
    /// entries are summed.
    pub fn from_weighted_edges(
        edges: &[(NodeId, NodeId, f64)],
        extra_nodes: impl IntoIterator<Item = NodeId>,
        directed: bool,
    ) -> Result<Graph> {
        for (i, &(_, _, w)) in edges.iter().enumerate() {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "edge {i}: weight must be finite and non-negative, got {w}"
                )));
            }
        }
        Self::assemble(edges, extra_nodes, Variant::new(directed, true))
    }

    fn assemble(
        raw: &[(NodeId, NodeId, f64)],
        extra_nodes: impl IntoIterator<Item = NodeId>,
        variant: Variant,
    ) -> Result<Graph> {
        let mut nodes: Vec<NodeId> = raw
            .iter()
            .flat_map(|&(s, t, _)| [s, t])
            .chain(extra_nodes)
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        let index = |id: NodeId| nodes.binary_search(&id).expect("registered node");

        let mut agg: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(s, t, w) in raw {
            let (mut a, mut b) = (index(s), index(t));
            if !variant.directed && a > b {
                core::mem::swap(&mut a, &mut b);
            }
            *agg.entry((a, b)).or_insert(0.0) += w;
        }
        let edges: Vec<Edge> = agg
            .into_iter()
            .map(|((source, target), w)| Edge {
                source,
                target,
                weight: if variant.weighted { w } else { 1.0 },
            })
            .collect();

        let n = nodes.len();
        let mut out_adj = alloc::vec![Vec::new(); n];
        let mut in_adj = alloc::vec![Vec::new(); if variant.directed { n } else { 0 }];
        let mut out_strength = alloc::vec![0.0; n];
        let mut in_strength = alloc::vec![0.0; n];
        let mut total_weight = 0.0;
        for e in &edges {
            total_weight += e.weight;
            out_adj[e.source].push((e.target, e.weight));
            if variant.directed {
                in_adj[e.target].push((e.source, e.weight));
                out_strength[e.source] += e.weight;
                in_strength[e.target] += e.weight;
            } else {
                if e.source != e.target {
                    out_adj[e.target].push((e.source, e.weight));
                }
                out_strength[e.source] += e.weight;
                out_strength[e.target] += e.weight;
            }
        }
        if !variant.directed {
            for list in &mut out_adj {
                list.sort_unstable_by_key(|&(j, _)| j);
            }
            in_strength.clone_from(&out_strength);
        }

        Ok(Graph {
            variant,
            nodes,
            edges,
            out_adj,
            in_adj,
            out_strength,
            in_strength,
            total_weight,
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn is_directed(&self) -> bool {
        self.variant.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.variant.weighted
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node ids in ascending order; position is the node index.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.nodes.binary_search(&id).ok()
    }

    /// Distinct edges sorted by `(source, target)` index.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Out-neighbours (all neighbours when undirected), sorted by index.
    pub fn out_neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.out_adj[i]
    }

    /// In-neighbours (all neighbours when undirected).
    pub fn in_neighbors(&self, i: usize) -> &[(usize, f64)] {
        if self.variant.directed {
            &self.in_adj[i]
        } else {
            &self.out_adj[i]
        }
    }

    /// `m`: sum of distinct edge weights.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Out-strength (`k_i` when undirected).
    pub fn out_strength(&self, i: usize) -> f64 {
        self.out_strength[i]
    }

    /// In-strength (`k_i` when undirected).
    pub fn in_strength(&self, i: usize) -> f64 {
        self.in_strength[i]
    }

    pub fn strengths(&self) -> Strengths {
        if self.variant.directed {
            Strengths::Directed {
                out: self.out_strength.clone(),
                inc: self.in_strength.clone(),
            }
        } else {
            Strengths::Undirected(self.out_strength.clone())
        }
    }

    /// Copy of the graph with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Graph> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|e| (self.nodes[e.source], self.nodes[e.target], e.weight * factor))
            .collect();
        let mut g = Self::assemble(&edges, self.nodes.iter().copied(), self.variant)?;
        g.variant.weighted = true;
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn rec(s: u64, t: u64, c: u64) -> OdRecord {
        OdRecord::new(s, t, c)
    }

    pub(crate) fn two_triangles() -> Graph {
        let e = [(1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (4, 6), (5, 6)];
        let recs: Vec<_> = e.iter().map(|&(a, b)| rec(a, b, 1)).collect();
        build_graph(&recs, false, false).unwrap()
    }

    #[test]
    fn aggregation_example() {
        let recs = [rec(1, 2, 1), rec(1, 2, 1), rec(2, 3, 1)];
        let g = build_graph(&recs, true, true).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edges()[0].weight, 2.0);
        assert_eq!(g.edges()[1].weight, 1.0);
        assert_eq!(g.total_weight(), 3.0);

        let g = build_graph(&recs, false, false).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.edges().iter().all(|e| e.weight == 1.0));
        assert_eq!(g.total_weight(), 2.0);
    }

    #[test]
    fn empty_records() {
        let g = build_graph(&[], true, true).unwrap();
        assert!(g.is_empty());
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.total_weight(), 0.0);
    }

    #[test]
    fn zero_count_rejected() {
        let err = build_graph(&[rec(1, 2, 1), rec(2, 3, 0)], true, true).unwrap_err();
        assert_eq!(err, Error::ZeroCount { index: 1 });
    }

    #[test]
    fn triangle_strengths() {
        let g = build_graph(&[rec(1, 2, 1), rec(2, 3, 1), rec(3, 1, 1)], false, false).unwrap();
        assert_eq!(g.strengths(), Strengths::Undirected(vec![2.0, 2.0, 2.0]));
        assert_eq!(2.0 * g.total_weight(), 6.0);
    }

    #[test]
    fn single_directed_edge() {
        let g = build_graph(&[rec(10, 20, 5)], true, true).unwrap();
        assert_eq!(g.out_strength(0), 5.0);
        assert_eq!(g.in_strength(1), 5.0);
        assert_eq!(g.in_strength(0), 0.0);
        assert_eq!(g.total_weight(), 5.0);
    }

    #[test]
    fn bridge_degrees() {
        let g = two_triangles();
        assert_eq!(
            g.strengths(),
            Strengths::Undirected(vec![2.0, 2.0, 3.0, 3.0, 2.0, 2.0])
        );
        assert_eq!(g.total_weight(), 7.0);
    }

    #[test]
    fn undirected_collapse_sums_both_directions() {
        let g = build_graph(&[rec(1, 2, 3), rec(2, 1, 4)], false, true).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges()[0].weight, 7.0);
        assert_eq!(g.strengths(), Strengths::Undirected(vec![7.0, 7.0]));
    }

    #[test]
    fn self_loops_are_kept() {
        let g = build_graph(&[rec(1, 1, 2), rec(1, 2, 1)], false, true).unwrap();
        assert_eq!(g.out_strength(0), 5.0);
        assert_eq!(g.total_weight(), 3.0);
        assert_eq!(g.out_neighbors(0), &[(0, 2.0), (1, 1.0)]);

        let g = build_graph(&[rec(1, 1, 2), rec(1, 2, 1)], true, true).unwrap();
        assert_eq!((g.out_strength(0), g.in_strength(0)), (3.0, 2.0));
    }

    #[test]
    fn isolated_nodes_are_registered() {
        let g = Graph::from_records(
            &[rec(1, 2, 1)],
            [NodeId(9), NodeId(1)],
            Variant::DIRECTED_WEIGHTED,
        )
        .unwrap();
        assert_eq!(g.nodes(), &[NodeId(1), NodeId(2), NodeId(9)]);
        assert_eq!(g.out_neighbors(2), &[]);
        assert_eq!(g.index_of(NodeId(9)), Some(2));
        assert_eq!(g.index_of(NodeId(3)), None);
    }
}

#[cfg(test)]
pub(crate) use tests::two_triangles;
