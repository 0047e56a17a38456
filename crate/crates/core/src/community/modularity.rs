use crate::community::{Partition, QualityParams};
use crate::error::Result;
use crate::graph::Graph;

/// Modularity of `p` on `g` at the given resolution.
///
/// Undirected: `Q = sum_c [ in_c / 2m - gamma (d_c / 2m)^2 ]`, with `in_c`
/// the double sum of `A_ij` over members (an internal edge of weight `w`,
/// self-loop or not, contributes `2w`).
///
/// Directed: `Q = sum_c [ L_c / m - gamma d_c^out d_c^in / m^2 ]`, with
/// `L_c` the weight of arcs inside `c`.
///
/// Returns 0 for a graph without edges.
pub fn modularity(g: &Graph, p: &Partition, q: QualityParams) -> Result<f64> {
    let totals = p.totals(g)?;
    let m = g.total_weight();
    if m == 0.0 {
        return Ok(0.0);
    }
    let gamma = q.gamma();
    // in arc units: undirected graphs count each edge in both directions
    let arcs = if g.is_directed() { m } else { 2.0 * m };
    let mut sum = 0.0;
    for c in 0..p.community_count() {
        sum += totals.internal[c] / arcs
            - gamma * (totals.out_strength[c] / arcs) * (totals.in_strength[c] / arcs);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, two_triangles, NodeId, OdRecord};
    use alloc::vec::Vec;

    fn unit() -> QualityParams {
        QualityParams::default()
    }

    #[test]
    fn whole_graph_is_zero() {
        let g = two_triangles();
        let q = modularity(&g, &Partition::whole(g.nodes()), unit()).unwrap();
        assert!(q.abs() < 1e-15);

        let recs = [OdRecord::new(1, 2, 3), OdRecord::new(2, 3, 1), OdRecord::new(3, 3, 2)];
        let g = build_graph(&recs, true, true).unwrap();
        let q = modularity(&g, &Partition::whole(g.nodes()), unit()).unwrap();
        assert!(q.abs() < 1e-15);
    }

    #[test]
    fn triangle_singletons() {
        let recs = [OdRecord::new(1, 2, 1), OdRecord::new(2, 3, 1), OdRecord::new(3, 1, 1)];
        let g = build_graph(&recs, false, false).unwrap();
        let q = modularity(&g, &Partition::singletons(g.nodes()), unit()).unwrap();
        assert!((q + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn two_triangles_split() {
        let g = two_triangles();
        let p = Partition::from_assignment(g.nodes().to_vec(), &[0, 0, 0, 1, 1, 1]).unwrap();
        let q = modularity(&g, &p, unit()).unwrap();
        assert!((q - 5.0 / 14.0).abs() < 1e-15);
    }

    #[test]
    fn undirected_self_loop_convention() {
        // single self-loop of weight w: k = 2w, m = w, in_c = 2w
        let g = build_graph(&[OdRecord::new(1, 1, 4)], false, true).unwrap();
        let q = modularity(&g, &Partition::whole(g.nodes()), unit()).unwrap();
        assert_eq!(q, 0.0);
    }

    #[test]
    fn mismatched_partition_rejected() {
        let g = two_triangles();
        let nodes: Vec<_> = (1..=5).map(NodeId).collect();
        assert!(modularity(&g, &Partition::whole(&nodes), unit()).is_err());
    }
}
