//! Map and graph exports: GeoJSON points and Graphviz DOT.

use serde_json::{json, Map, Value};

use subcity_core::centrality::CentralityResult;
use subcity_core::community::Partition;
use subcity_core::geo::GeoPoint;
use subcity_core::{Error, Graph, NodeId, Result};

/// A `FeatureCollection` with one `Point` per located node, sorted by id.
/// Each feature carries `id`, `community` and any of the given scores.
pub fn geojson(
    located: &[(NodeId, GeoPoint)],
    p: &Partition,
    scores: &[&CentralityResult],
) -> Result<String> {
    let mut rows = located.to_vec();
    rows.sort_by_key(|r| r.0);
    let mut features = Vec::with_capacity(rows.len());
    for (id, pt) in rows {
        let c = p.community_of(id).ok_or(Error::UnassignedNode(id))?;
        let mut props = Map::new();
        props.insert("id".into(), json!(id.0));
        props.insert("community".into(), json!(c));
        for s in scores {
            let v = s.score_of(id).ok_or(Error::UnassignedNode(id))?;
            props.insert(s.measure.name().into(), json!(v));
        }
        features.push(json!({
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [pt.lon, pt.lat]},
            "properties": Value::Object(props),
        }));
    }
    let doc = json!({"type": "FeatureCollection", "features": features});
    let mut out = serde_json::to_string_pretty(&doc).expect("json values always serialise");
    out.push('\n');
    Ok(out)
}

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

/// Nodes coloured by community index, edges labelled with their weight.
pub fn dot(g: &Graph, p: &Partition) -> Result<String> {
    if p.nodes() != g.nodes() {
        return Err(Error::PartitionMismatch("partition does not cover the graph".into()));
    }
    let (kind, arrow) = if g.is_directed() { ("digraph", "->") } else { ("graph", "--") };
    let mut out = format!("{kind} subcity {{\n");
    for (&id, &c) in g.nodes().iter().zip(p.assignment()) {
        out.push_str(&format!(
            "  {id} [community={c}, style=filled, fillcolor=\"{}\"];\n",
            PALETTE[c % PALETTE.len()]
        ));
    }
    let nodes = g.nodes();
    let mut edges: Vec<_> = g.edges().iter().map(|e| (nodes[e.source], nodes[e.target], e.weight)).collect();
    edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    for (s, t, w) in edges {
        out.push_str(&format!("  {s} {arrow} {t} [weight={w}];\n"));
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use subcity_core::graph::build_graph;
    use subcity_core::OdRecord;

    #[test]
    fn two_node_geojson() {
        let p = Partition::from_labels([(NodeId(2), 1), (NodeId(1), 0)]).unwrap();
        let pts = [
            (NodeId(2), GeoPoint::new(-33.4, -70.6).unwrap()),
            (NodeId(1), GeoPoint::new(-33.5, -70.7).unwrap()),
        ];
        let v: Value = serde_json::from_str(&geojson(&pts, &p, &[]).unwrap()).unwrap();
        let f = v["features"].as_array().unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0]["properties"]["id"], 1);
        assert_eq!(f[0]["geometry"]["coordinates"][0], -70.7);
    }

    #[test]
    fn dot_counts() {
        let g = build_graph(&[OdRecord::new(1, 2, 3), OdRecord::new(2, 3, 1)], true, true).unwrap();
        let p = Partition::whole(g.nodes());
        let d = dot(&g, &p).unwrap();
        assert_eq!(d.matches("fillcolor").count(), 3);
        assert_eq!(d.matches(" -> ").count(), 2);
        assert!(d.contains("1 -> 2 [weight=3]"));
    }
}
