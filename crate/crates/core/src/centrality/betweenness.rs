//! Brandes' betweenness centrality.

use alloc::collections::{BinaryHeap, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::centrality::{CentralityResult, Measure};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Length assigned to each edge for shortest paths.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum EdgeLength {
    /// Hop count (BFS).
    #[default]
    Unit,
    /// `1 / weight`: heavy commuter flow means a short connection.
    InverseWeight,
}

/// Relative slack under which two path lengths count as equal.
const LENGTH_EPS: f64 = 1e-12;

/// Scratch buffers for one single-source pass; reuse across sources.
pub struct BrandesWorkspace {
    sigma: Vec<f64>,
    dist: Vec<f64>,
    delta: Vec<f64>,
    preds: Vec<Vec<usize>>,
    order: Vec<usize>,
    settled: Vec<bool>,
    queue: VecDeque<usize>,
    heap: BinaryHeap<Frontier>,
}

#[derive(Copy, Clone, PartialEq)]
struct Frontier {
    dist: f64,
    node: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, ties by node index
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BrandesWorkspace {
    pub fn new(n: usize) -> Self {
        BrandesWorkspace {
            sigma: vec![0.0; n],
            dist: vec![f64::INFINITY; n],
            delta: vec![0.0; n],
            preds: vec![Vec::new(); n],
            order: Vec::with_capacity(n),
            settled: vec![false; n],
            queue: VecDeque::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        self.sigma.fill(0.0);
        self.dist.fill(f64::INFINITY);
        self.delta.fill(0.0);
        self.settled.fill(false);
        for p in &mut self.preds {
            p.clear();
        }
        self.order.clear();
        self.queue.clear();
        self.heap.clear();
    }

    /// Dependencies `delta_s(v)` of every node on source `s`, with
    /// `delta_s(s) = 0`.
    pub fn dependencies(&mut self, g: &Graph, s: usize, length: EdgeLength) -> &[f64] {
        self.reset();
        self.sigma[s] = 1.0;
        self.dist[s] = 0.0;
        match length {
            EdgeLength::Unit => self.bfs(g, s),
            EdgeLength::InverseWeight => self.dijkstra(g, s),
        }
        // accumulate in reverse settlement order
        while let Some(w) = self.order.pop() {
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for &v in &self.preds[w] {
                self.delta[v] += self.sigma[v] * coeff;
            }
        }
        self.delta[s] = 0.0;
        &self.delta
    }

    fn bfs(&mut self, g: &Graph, s: usize) {
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            let next = self.dist[v] + 1.0;
            for &(w, _) in g.out_neighbors(v) {
                if w == v {
                    continue;
                }
                if self.dist[w].is_infinite() {
                    self.dist[w] = next;
                    self.queue.push_back(w);
                }
                if self.dist[w] == next {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push(v);
                }
            }
        }
    }

    fn dijkstra(&mut self, g: &Graph, s: usize) {
        self.heap.push(Frontier { dist: 0.0, node: s });
        while let Some(Frontier { dist, node: v }) = self.heap.pop() {
            if self.settled[v] || dist > self.dist[v] {
                continue;
            }
            self.settled[v] = true;
            self.order.push(v);
            for &(w, weight) in g.out_neighbors(v) {
                if w == v || weight <= 0.0 || self.settled[w] {
                    continue;
                }
                let cand = self.dist[v] + 1.0 / weight;
                let cur = self.dist[w];
                let slack = LENGTH_EPS * cand.max(1.0);
                if cand < cur - slack {
                    self.dist[w] = cand;
                    self.sigma[w] = self.sigma[v];
                    self.preds[w].clear();
                    self.preds[w].push(v);
                    self.heap.push(Frontier { dist: cand, node: w });
                } else if (cand - cur).abs() <= slack {
                    self.sigma[w] += self.sigma[v];
                    self.preds[w].push(v);
                }
            }
        }
    }
}

/// Scale raw ordered-pair sums to `[0, 1]`.
///
/// Sources run over every node in both graph kinds, so undirected pairs
/// are seen twice; dividing by `(n-1)(n-2)` gives the directed
/// normalisation and the undirected `(n-1)(n-2)/2` one at once.
pub fn normalize_betweenness(g: &Graph, length: EdgeLength, raw: Vec<f64>) -> CentralityResult {
    let n = g.node_count();
    let kind = if g.is_directed() { "(n-1)(n-2)" } else { "(n-1)(n-2)/2" };
    let len = match length {
        EdgeLength::Unit => "unit",
        EdgeLength::InverseWeight => "inverse-weight",
    };
    let (scores, warning) = if n < 3 {
        (
            vec![0.0; n],
            Some(format!("betweenness normalisation undefined for {n} nodes; all scores 0")),
        )
    } else {
        let norm = ((n - 1) * (n - 2)) as f64;
        (raw.into_iter().map(|x| x / norm).collect(), None)
    };
    CentralityResult {
        measure: Measure::Betweenness,
        nodes: g.nodes().to_vec(),
        scores,
        normalization: format!("{len} lengths, divided by {kind}"),
        eigenvalue: None,
        iterations: None,
        warning,
    }
}

/// Exact betweenness over all sources, accumulated in source order.
pub fn betweenness(g: &Graph, length: EdgeLength) -> Result<CentralityResult> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let n = g.node_count();
    let mut raw = vec![0.0; n];
    if n >= 3 {
        let mut ws = BrandesWorkspace::new(n);
        for s in 0..n {
            for (acc, d) in raw.iter_mut().zip(ws.dependencies(g, s, length)) {
                *acc += d;
            }
        }
    }
    Ok(normalize_betweenness(g, length, raw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, NodeId, OdRecord, Variant};

    fn undirected(edges: &[(u64, u64)]) -> Graph {
        let recs: Vec<_> = edges.iter().map(|&(a, b)| OdRecord::new(a, b, 1)).collect();
        build_graph(&recs, false, false).unwrap()
    }

    #[test]
    fn path_middle_is_one() {
        let g = undirected(&[(1, 2), (2, 3)]);
        let b = betweenness(&g, EdgeLength::Unit).unwrap();
        assert_eq!(b.scores, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn star_center_is_one() {
        let g = undirected(&[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        let b = betweenness(&g, EdgeLength::Unit).unwrap();
        assert_eq!(b.scores[0], 1.0);
        assert!(b.scores[1..].iter().all(|&s| s == 0.0));
    }

    #[test]
    fn directed_three_cycle() {
        let recs = [OdRecord::new(1, 2, 1), OdRecord::new(2, 3, 1), OdRecord::new(3, 1, 1)];
        let g = build_graph(&recs, true, false).unwrap();
        let b = betweenness(&g, EdgeLength::Unit).unwrap();
        assert_eq!(b.scores, vec![0.5, 0.5, 0.5]);
    }

    #[test]
    fn fewer_than_three_nodes_warns() {
        let g = undirected(&[(1, 2)]);
        let b = betweenness(&g, EdgeLength::Unit).unwrap();
        assert_eq!(b.scores, vec![0.0, 0.0]);
        assert!(b.warning.is_some());
    }

    #[test]
    fn parallel_shortest_paths_share_credit() {
        // square 1-2-4, 1-3-4: 2 and 3 each carry half of the (1,4) pair
        let g = undirected(&[(1, 2), (1, 3), (2, 4), (3, 4)]);
        let b = betweenness(&g, EdgeLength::Unit).unwrap();
        // raw ordered: node 2 gets 0.5 from (1,4) and (4,1) = 1, over 3*2
        assert!((b.scores[1] - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(b.scores[1], b.scores[2]);
    }

    #[test]
    fn inverse_weight_prefers_heavy_edges() {
        // 1-2-3 heavy (w=4 each, length 0.5) vs direct 1-3 light (w=1, length 1)
        let recs = [OdRecord::new(1, 2, 4), OdRecord::new(2, 3, 4), OdRecord::new(1, 3, 1)];
        let g = Graph::from_records(&recs, [NodeId(1)], Variant::UNDIRECTED_WEIGHTED).unwrap();
        let unit = betweenness(&g, EdgeLength::Unit).unwrap();
        let inv = betweenness(&g, EdgeLength::InverseWeight).unwrap();
        assert_eq!(unit.scores[1], 0.0);
        assert_eq!(inv.scores[1], 1.0);
    }

    #[test]
    fn self_loops_ignored() {
        let g = undirected(&[(1, 2), (2, 3), (2, 2)]);
        let b = betweenness(&g, EdgeLength::Unit).unwrap();
        assert_eq!(b.scores, vec![0.0, 1.0, 0.0]);
    }
}
