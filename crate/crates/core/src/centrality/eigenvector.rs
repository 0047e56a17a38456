//! Eigenvector centrality by power iteration.
//!
//! Iterates `x <- (A^T + I) x` with Euclidean normalisation. Directed
//! graphs score nodes by their incoming edges. The identity shift leaves
//! the eigenvectors unchanged and removes the sign oscillation on
//! bipartite graphs such as stars.

use alloc::format;
use alloc::string::String;
use alloc::vec;
#[cfg(test)]
use alloc::vec::Vec;

use crate::centrality::{CentralityResult, Measure};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct EigenConfig {
    /// Converged once `max_i |x_{t+1,i} - x_{t,i}| <= tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Uniform teleport mixed in each step. Not an eigenvector method any
    /// more once set; meant for graphs that are not strongly connected.
    pub damping: Option<f64>,
}

impl Default for EigenConfig {
    fn default() -> Self {
        EigenConfig {
            tol: 1e-10,
            max_iter: 10_000,
            damping: None,
        }
    }
}

/// `y_i = sum_j A_ji x_j`, summing each in-list in index order.
pub fn in_edge_product(g: &Graph, i: usize, x: &[f64]) -> f64 {
    g.in_neighbors(i).iter().map(|&(j, w)| w * x[j]).sum()
}

fn l2(x: &[f64]) -> f64 {
    libm::sqrt(x.iter().map(|v| v * v).sum())
}

pub fn eigenvector(g: &Graph, cfg: &EigenConfig) -> Result<CentralityResult> {
    eigenvector_with(g, cfg, |x, y| {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = in_edge_product(g, i, x);
        }
    })
}

/// Power iteration with a caller-supplied product `y = A^T x`, so callers
/// can evaluate it in parallel. Any product that computes every entry with
/// [`in_edge_product`] yields bit-identical results.
pub fn eigenvector_with(
    g: &Graph,
    cfg: &EigenConfig,
    mut product: impl FnMut(&[f64], &mut [f64]),
) -> Result<CentralityResult> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if g.edge_count() == 0 || g.total_weight() == 0.0 {
        return Err(Error::NoEdges);
    }
    if let Some(d) = cfg.damping {
        if !(0.0..1.0).contains(&d) {
            return Err(Error::InvalidArgument(format!("damping must be in [0, 1), got {d}")));
        }
    }
    let n = g.node_count();
    let uniform = 1.0 / libm::sqrt(n as f64);
    let mut x = vec![uniform; n];
    let mut ax = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut last_delta = f64::INFINITY;

    for iter in 1..=cfg.max_iter {
        product(&x, &mut ax);
        for i in 0..n {
            next[i] = ax[i] + x[i];
        }
        let norm = l2(&next);
        for v in next.iter_mut() {
            *v /= norm;
        }
        if let Some(d) = cfg.damping {
            for v in next.iter_mut() {
                *v = (1.0 - d) * *v + d * uniform;
            }
            let norm = l2(&next);
            for v in next.iter_mut() {
                *v /= norm;
            }
        }
        last_delta = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        core::mem::swap(&mut x, &mut next);
        if last_delta <= cfg.tol {
            product(&x, &mut ax);
            let lambda: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
            let mut normalization = String::from("euclidean norm 1, power iteration on A^T + I");
            if let Some(d) = cfg.damping {
                normalization = format!("{normalization}, uniform teleport {d} (not an eigenvector)");
            }
            return Ok(CentralityResult {
                measure: Measure::Eigenvector,
                nodes: g.nodes().to_vec(),
                scores: x,
                normalization,
                eigenvalue: Some(lambda),
                iterations: Some(iter),
                warning: None,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iter,
        last_delta,
        hint: "the dominant eigenvalue is not separated (periodic structure or several disconnected dominant components)",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, OdRecord};

    fn undirected(edges: &[(u64, u64)]) -> Graph {
        let recs: Vec<_> = edges.iter().map(|&(a, b)| OdRecord::new(a, b, 1)).collect();
        build_graph(&recs, false, false).unwrap()
    }

    #[test]
    fn cycle_is_uniform() {
        let n = 7u64;
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let r = eigenvector(&undirected(&edges), &EigenConfig::default()).unwrap();
        for s in &r.scores {
            assert!((s - 1.0 / libm::sqrt(n as f64)).abs() < 1e-12);
        }
        assert!((r.eigenvalue.unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn star_closed_form() {
        let leaves = 5u64;
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        let r = eigenvector(&undirected(&edges), &EigenConfig::default()).unwrap();
        assert!((r.scores[0] - 1.0 / libm::sqrt(2.0)).abs() < 1e-10);
        for s in &r.scores[1..] {
            assert!((s - 1.0 / libm::sqrt(2.0 * leaves as f64)).abs() < 1e-10);
        }
    }

    #[test]
    fn directed_scores_incoming() {
        // 1 -> 2 <- 3, 2 -> 1: the sink-heavy node 2 dominates
        let recs = [OdRecord::new(1, 2, 1), OdRecord::new(3, 2, 1), OdRecord::new(2, 1, 1)];
        let g = build_graph(&recs, true, true).unwrap();
        let r = eigenvector(&g, &EigenConfig::default()).unwrap();
        assert!(r.scores[1] > r.scores[0] && r.scores[0] > r.scores[2]);
    }

    #[test]
    fn no_edges_is_an_error() {
        let g = crate::graph::Graph::from_records(
            &[],
            [crate::graph::NodeId(1)],
            crate::graph::Variant::DIRECTED_WEIGHTED,
        )
        .unwrap();
        assert_eq!(eigenvector(&g, &EigenConfig::default()).unwrap_err(), Error::NoEdges);
    }

    #[test]
    fn iteration_budget_exhausted() {
        let g = undirected(&[(1, 2), (2, 3), (3, 4), (4, 5)]);
        let cfg = EigenConfig {
            max_iter: 2,
            ..Default::default()
        };
        assert!(matches!(eigenvector(&g, &cfg), Err(Error::NoConvergence { iterations: 2, .. })));
    }

    #[test]
    fn damping_is_labelled() {
        let g = undirected(&[(1, 2), (2, 3)]);
        let cfg = EigenConfig {
            damping: Some(0.15),
            ..Default::default()
        };
        let r = eigenvector(&g, &cfg).unwrap();
        assert!(r.normalization.contains("teleport"));
        assert!((l2(&r.scores) - 1.0).abs() < 1e-12);
    }
}
