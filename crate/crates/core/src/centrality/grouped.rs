use alloc::vec::Vec;

use crate::centrality::CentralityResult;
use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::stats;

/// Box-plot summary of one community's scores.
///
/// Whiskers end at the most extreme scores inside the 1.5 IQR fences;
/// outliers are the scores outside them.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupStats {
    pub community: usize,
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub lower_fence: f64,
    pub upper_fence: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: Vec<NodeId>,
}

/// Per-community statistics, sorted by community index. Communities with
/// no scored node are skipped.
pub fn group_stats(scores: &CentralityResult, p: &Partition) -> Result<Vec<GroupStats>> {
    let mut groups: Vec<Vec<(NodeId, f64)>> = alloc::vec![Vec::new(); p.community_count()];
    for (&id, &s) in scores.nodes.iter().zip(&scores.scores) {
        let c = p.community_of(id).ok_or(Error::UnassignedNode(id))?;
        groups[c].push((id, s));
    }
    let mut out = Vec::new();
    for (community, members) in groups.into_iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        let mut values: Vec<f64> = members.iter().map(|m| m.1).collect();
        values.sort_by(f64::total_cmp);
        let q1 = stats::quantile_sorted(&values, 0.25).unwrap_or(f64::NAN);
        let q3 = stats::quantile_sorted(&values, 0.75).unwrap_or(f64::NAN);
        let iqr = q3 - q1;
        let lower_fence = q1 - 1.5 * iqr;
        let upper_fence = q3 + 1.5 * iqr;
        let inside = |v: f64| v >= lower_fence && v <= upper_fence;
        let whisker_low = values.iter().copied().find(|&v| inside(v)).unwrap_or(q1);
        let whisker_high = values.iter().rev().copied().find(|&v| inside(v)).unwrap_or(q3);
        out.push(GroupStats {
            community,
            count: members.len(),
            mean: stats::mean(&values).unwrap_or(f64::NAN),
            median: stats::median(&values).unwrap_or(f64::NAN),
            q1,
            q3,
            lower_fence,
            upper_fence,
            whisker_low,
            whisker_high,
            outliers: members.iter().filter(|m| !inside(m.1)).map(|m| m.0).collect(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::Measure;
    use alloc::string::String;
    use alloc::vec;

    fn result(scores: &[f64]) -> CentralityResult {
        CentralityResult {
            measure: Measure::Betweenness,
            nodes: (0..scores.len() as u64).map(NodeId).collect(),
            scores: scores.to_vec(),
            normalization: String::new(),
            eigenvalue: None,
            iterations: None,
            warning: None,
        }
    }

    #[test]
    fn single_community() {
        let r = result(&[1.0, 2.0, 3.0, 4.0]);
        let p = Partition::whole(&r.nodes);
        let s = group_stats(&r, &p).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].mean, s[0].median), (2.5, 2.5));
        assert!(s[0].q1 <= s[0].median && s[0].median <= s[0].q3);
    }

    #[test]
    fn constant_scores_have_no_outliers() {
        let r = result(&[0.3; 6]);
        let s = group_stats(&r, &Partition::whole(&r.nodes)).unwrap();
        assert_eq!(s[0].q3 - s[0].q1, 0.0);
        assert!(s[0].outliers.is_empty());
    }

    #[test]
    fn far_value_is_an_outlier() {
        let r = result(&[1.0, 1.1, 0.9, 1.0, 1.05, 9.0]);
        let s = group_stats(&r, &Partition::whole(&r.nodes)).unwrap();
        assert_eq!(s[0].outliers, vec![NodeId(5)]);
        assert!(s[0].whisker_high < 9.0);
    }

    #[test]
    fn unassigned_node_rejected() {
        let r = result(&[1.0, 2.0]);
        let p = Partition::whole(&[NodeId(0)]);
        assert_eq!(group_stats(&r, &p).unwrap_err(), Error::UnassignedNode(NodeId(1)));
    }

    #[test]
    fn sorted_by_community_and_recomposes_mean() {
        let r = result(&[5.0, 1.0, 2.0, 7.0, 3.0]);
        let p = Partition::from_assignment(r.nodes.clone(), &[0, 1, 1, 0, 2]).unwrap();
        let s = group_stats(&r, &p).unwrap();
        assert_eq!(s.iter().map(|g| g.community).collect::<Vec<_>>(), vec![0, 1, 2]);
        let total: f64 = s.iter().map(|g| g.mean * g.count as f64).sum();
        assert!((total / 5.0 - 3.6).abs() < 1e-12);
    }
}
