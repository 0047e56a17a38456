//! Two-phase Louvain optimisation of resolution modularity.
//!
//! Both graph kinds run on one internal representation. Every node keeps
//! its combined neighbour weights `A_ij + A_ji` (self excluded), a self-arc
//! weight, and out/in strengths. Undirected graphs enter as symmetric arc
//! sets, so `M = 2m` and an undirected self-loop of weight `w` becomes a
//! self-arc of `2w`. The directed quality
//!
//! `Q = sum_c [ L_c / M - gamma D_c^out D_c^in / M^2 ]`
//!
//! then equals the undirected one exactly, and a single gain formula
//! serves both.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::community::{renumber, CommunityTotals, Partition, QualityParams};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;

/// Minimum improvement of Q for a local-moving pass or a level to count.
const MIN_GAIN: f64 = 1e-12;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum VisitOrder {
    #[default]
    Ascending,
    /// Fresh seeded shuffle of the node order at every level.
    Shuffled,
}

/// How the resolution enters the objective.
///
/// * `Gamma`: `edge_term - (1/r) null_term` (modularity proper).
/// * `ResolutionScaled`: `r edge_term - null_term`, which is `r` times the
///   former and therefore has the same maximisers.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Objective {
    #[default]
    Gamma,
    ResolutionScaled,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct LouvainConfig {
    pub quality: QualityParams,
    pub seed: u64,
    pub order: VisitOrder,
    pub objective: Objective,
}

impl LouvainConfig {
    pub fn new(resolution: f64) -> Result<Self> {
        Ok(LouvainConfig {
            quality: QualityParams::new(resolution)?,
            ..Default::default()
        })
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn order(mut self, order: VisitOrder) -> Self {
        self.order = order;
        self
    }

    pub fn objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }
}

impl Default for LouvainConfig {
    fn default() -> Self {
        LouvainConfig {
            quality: QualityParams::default(),
            seed: 0,
            order: VisitOrder::Ascending,
            objective: Objective::Gamma,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LouvainResult {
    pub partition: Partition,
    /// Q_gamma evaluated from the incrementally maintained totals.
    pub modularity: f64,
    /// Maintained per-community totals, in [`Partition::totals`] units.
    pub totals: CommunityTotals,
    /// Number of aggregation levels that improved Q.
    pub levels: usize,
}

struct Net {
    nbrs: Vec<Vec<(usize, f64)>>,
    self_arc: Vec<f64>,
    out: Vec<f64>,
    inc: Vec<f64>,
    arcs: f64,
}

impl Net {
    fn from_graph(g: &Graph) -> Net {
        let n = g.node_count();
        let mut raw: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut self_arc = vec![0.0; n];
        let directed = g.is_directed();
        for e in g.edges() {
            let w = if directed { e.weight } else { 2.0 * e.weight };
            if e.source == e.target {
                self_arc[e.source] += w;
            } else {
                // undirected: w is already A_ij + A_ji
                raw[e.source].push((e.target, w));
                raw[e.target].push((e.source, w));
            }
        }
        let nbrs = raw.into_iter().map(merge_sorted).collect();
        let out = (0..n).map(|i| g.out_strength(i)).collect();
        let inc = (0..n).map(|i| g.in_strength(i)).collect();
        let arcs = if directed {
            g.total_weight()
        } else {
            2.0 * g.total_weight()
        };
        Net {
            nbrs,
            self_arc,
            out,
            inc,
            arcs,
        }
    }

    fn len(&self) -> usize {
        self.self_arc.len()
    }

    /// Collapse communities (dense labels `0..k`) into super-nodes.
    fn aggregate(&self, labels: &[usize], k: usize) -> Net {
        let mut raw: Vec<Vec<(usize, f64)>> = vec![Vec::new(); k];
        let mut self_arc = vec![0.0; k];
        let mut out = vec![0.0; k];
        let mut inc = vec![0.0; k];
        for i in 0..self.len() {
            let c = labels[i];
            self_arc[c] += self.self_arc[i];
            out[c] += self.out[i];
            inc[c] += self.inc[i];
            for &(j, w) in &self.nbrs[i] {
                let d = labels[j];
                if d == c {
                    // each unordered pair is visited from both ends
                    self_arc[c] += 0.5 * w;
                } else {
                    raw[c].push((d, w));
                }
            }
        }
        Net {
            nbrs: raw.into_iter().map(merge_sorted).collect(),
            self_arc,
            out,
            inc,
            arcs: self.arcs,
        }
    }
}

fn merge_sorted(mut v: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    v.sort_by_key(|&(j, _)| j);
    let mut merged: Vec<(usize, f64)> = Vec::with_capacity(v.len());
    for (j, w) in v {
        match merged.last_mut() {
            Some(last) if last.0 == j => last.1 += w,
            _ => merged.push((j, w)),
        }
    }
    merged
}

/// Community state over one level's nodes.
struct State {
    comm: Vec<usize>,
    size: Vec<usize>,
    internal: Vec<f64>,
    tot_out: Vec<f64>,
    tot_in: Vec<f64>,
    free: Vec<usize>,
}

impl State {
    fn singletons(net: &Net) -> State {
        let n = net.len();
        State {
            comm: (0..n).collect(),
            size: vec![1; n],
            internal: net.self_arc.clone(),
            tot_out: net.out.clone(),
            tot_in: net.inc.clone(),
            free: Vec::new(),
        }
    }
}

struct Coefficients {
    edge: f64,
    null: f64,
    gamma: f64,
}

impl Coefficients {
    fn new(cfg: &LouvainConfig) -> Self {
        let r = cfg.quality.resolution();
        let gamma = cfg.quality.gamma();
        match cfg.objective {
            Objective::Gamma => Coefficients {
                edge: 1.0,
                null: gamma,
                gamma,
            },
            Objective::ResolutionScaled => Coefficients {
                edge: r,
                null: 1.0,
                gamma,
            },
        }
    }
}

/// Run Louvain on `g`. Deterministic for a given `(seed, order)`.
pub fn louvain(g: &Graph, cfg: &LouvainConfig) -> Result<LouvainResult> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let coef = Coefficients::new(cfg);
    let mut net = Net::from_graph(g);
    let n = g.node_count();
    let mut node_comm: Vec<usize> = (0..n).collect();
    let mut rng = rng::rng_from(rng::derive_seed(cfg.seed, "louvain-order", 0));

    let mut state = State::singletons(&net);
    let mut q = quality(&state, net.arcs, coef.gamma);
    let mut levels = 0;

    if net.arcs > 0.0 {
        loop {
            let mut order: Vec<usize> = (0..net.len()).collect();
            if cfg.order == VisitOrder::Shuffled {
                order.shuffle(&mut rng);
            }
            let improved = local_moving(&net, &mut state, &order, &coef);
            let next_q = quality(&state, net.arcs, coef.gamma);
            if !improved || next_q - q <= MIN_GAIN {
                break;
            }
            q = next_q;
            levels += 1;
            let (labels, k) = renumber(&state.comm);
            project(&mut node_comm, &labels);
            net = net.aggregate(&labels, k);
            state = State::singletons(&net);
        }
    }
    // the last level's moves are kept even when they fell under the threshold
    project(&mut node_comm, &state.comm);
    q = quality(&state, net.arcs, coef.gamma);

    let (final_labels, k) = renumber(&node_comm);
    let partition = Partition::from_assignment(g.nodes().to_vec(), &final_labels)?;
    let totals = maintained_totals(&state, &node_comm, &final_labels, k);
    Ok(LouvainResult {
        partition,
        modularity: q,
        totals,
        levels,
    })
}

fn project(node_comm: &mut [usize], level: &[usize]) {
    for c in node_comm.iter_mut() {
        *c = level[*c];
    }
}

/// Reorder the maintained community totals to the final dense labels.
fn maintained_totals(
    state: &State,
    node_comm: &[usize],
    final_labels: &[usize],
    k: usize,
) -> CommunityTotals {
    let mut t = CommunityTotals {
        internal: vec![0.0; k],
        out_strength: vec![0.0; k],
        in_strength: vec![0.0; k],
    };
    let mut done = vec![false; k];
    for (&raw, &fin) in node_comm.iter().zip(final_labels) {
        if !core::mem::replace(&mut done[fin], true) {
            t.internal[fin] = state.internal[raw];
            t.out_strength[fin] = state.tot_out[raw];
            t.in_strength[fin] = state.tot_in[raw];
        }
    }
    t
}

fn quality(state: &State, arcs: f64, gamma: f64) -> f64 {
    if arcs == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for c in 0..state.internal.len() {
        if state.size[c] > 0 {
            q += state.internal[c] / arcs
                - gamma * (state.tot_out[c] / arcs) * (state.tot_in[c] / arcs);
        }
    }
    q
}

/// Repeated local-moving passes until a pass moves nothing or gains less
/// than [`MIN_GAIN`]. Returns whether any node moved.
fn local_moving(net: &Net, st: &mut State, order: &[usize], coef: &Coefficients) -> bool {
    let n = net.len();
    let mut link = vec![0.0; n];
    let mut seen = vec![false; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut any = false;
    loop {
        let mut moves = 0usize;
        let mut pass_gain = 0.0;
        for &i in order {
            let old = st.comm[i];
            let (k_out, k_in) = (net.out[i], net.inc[i]);

            for &(j, w) in &net.nbrs[i] {
                let c = st.comm[j];
                if !seen[c] {
                    seen[c] = true;
                    touched.push(c);
                }
                link[c] += w;
            }
            touched.sort_unstable();

            // take i out of its community
            let w_old = link[old];
            st.size[old] -= 1;
            st.internal[old] -= w_old + net.self_arc[i];
            st.tot_out[old] -= k_out;
            st.tot_in[old] -= k_in;

            // gains are scaled by M; ties keep the lowest community index
            let gain = |c: usize, w: f64, st: &State| {
                coef.edge * w - coef.null * (k_out * st.tot_in[c] + k_in * st.tot_out[c]) / net.arcs
            };
            let g_old = gain(old, w_old, st);
            let mut best = old;
            let mut best_gain = g_old;
            for &c in &touched {
                if c == old {
                    continue;
                }
                let g = gain(c, link[c], st);
                if g > best_gain {
                    best = c;
                    best_gain = g;
                }
            }
            if best_gain < 0.0 && st.size[old] > 0 {
                // an empty community is worth exactly 0
                if let Some(empty) = st.free.last().copied() {
                    best = empty;
                    best_gain = 0.0;
                    st.free.pop();
                }
            }

            let w_new = if st.size[best] == 0 { 0.0 } else { link[best] };
            st.size[best] += 1;
            st.internal[best] += w_new + net.self_arc[i];
            st.tot_out[best] += k_out;
            st.tot_in[best] += k_in;
            st.comm[i] = best;
            if best != old {
                moves += 1;
                pass_gain += (best_gain - g_old) / net.arcs;
                if st.size[old] == 0 {
                    st.free.push(old);
                }
            }

            for &c in &touched {
                link[c] = 0.0;
                seen[c] = false;
            }
            touched.clear();
        }
        if moves > 0 {
            any = true;
        }
        if moves == 0 || pass_gain <= MIN_GAIN {
            return any;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::modularity;
    use crate::graph::{build_graph, two_triangles, OdRecord};

    fn run(g: &Graph, r: f64) -> LouvainResult {
        louvain(g, &LouvainConfig::new(r).unwrap()).unwrap()
    }

    #[test]
    fn two_triangles_unit_resolution() {
        let g = two_triangles();
        let res = run(&g, 1.0);
        assert_eq!(res.partition.assignment(), &[0, 0, 0, 1, 1, 1]);
        assert!((res.modularity - 5.0 / 14.0).abs() < 1e-12);
    }

    #[test]
    fn two_triangles_high_gamma_stays_singleton() {
        let g = two_triangles();
        let res = run(&g, 0.25);
        assert_eq!(res.partition.community_count(), 6);
    }

    #[test]
    fn complete_graph_single_community() {
        let mut recs = Vec::new();
        for a in 1..=5u64 {
            for b in (a + 1)..=5 {
                recs.push(OdRecord::new(a, b, 1));
            }
        }
        let g = build_graph(&recs, false, false).unwrap();
        let res = run(&g, 1.0);
        assert_eq!(res.partition.community_count(), 1);
        assert!(res.modularity.abs() < 1e-12);
    }

    #[test]
    fn isolated_nodes_only() {
        let g = Graph::from_records(
            &[],
            [crate::graph::NodeId(1), crate::graph::NodeId(2)],
            crate::graph::Variant::DIRECTED_WEIGHTED,
        )
        .unwrap();
        let res = run(&g, 1.0);
        assert_eq!(res.partition.community_count(), 2);
        assert_eq!(res.modularity, 0.0);
    }

    #[test]
    fn empty_graph_rejected() {
        let g = build_graph(&[], false, false).unwrap();
        assert!(matches!(louvain(&g, &LouvainConfig::default()), Err(Error::EmptyGraph)));
    }

    #[test]
    fn directed_two_cycles() {
        // two directed 3-cycles with one arc between them
        let recs = [
            OdRecord::new(1, 2, 1),
            OdRecord::new(2, 3, 1),
            OdRecord::new(3, 1, 1),
            OdRecord::new(4, 5, 1),
            OdRecord::new(5, 6, 1),
            OdRecord::new(6, 4, 1),
            OdRecord::new(3, 4, 1),
        ];
        let g = build_graph(&recs, true, true).unwrap();
        let res = run(&g, 1.0);
        assert_eq!(res.partition.assignment(), &[0, 0, 0, 1, 1, 1]);
        let q = modularity(&g, &res.partition, QualityParams::default()).unwrap();
        assert!((q - res.modularity).abs() < 1e-12);
    }

    #[test]
    fn maintained_totals_match_recomputation() {
        let recs: Vec<_> = [(1, 2, 3), (2, 3, 1), (3, 1, 2), (3, 4, 1), (4, 5, 4), (5, 6, 2), (6, 4, 1), (2, 2, 3)]
            .iter()
            .map(|&(a, b, c)| OdRecord::new(a, b, c))
            .collect();
        for directed in [false, true] {
            let g = build_graph(&recs, directed, true).unwrap();
            let res = run(&g, 1.0);
            let fresh = res.partition.totals(&g).unwrap();
            for c in 0..res.partition.community_count() {
                let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs().max(1.0);
                assert!(close(res.totals.internal[c], fresh.internal[c]));
                assert!(close(res.totals.out_strength[c], fresh.out_strength[c]));
                assert!(close(res.totals.in_strength[c], fresh.in_strength[c]));
            }
        }
    }
}
