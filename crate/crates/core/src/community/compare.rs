//! Agreement between two partitions of the same node universe.

use alloc::vec;
use alloc::vec::Vec;

use crate::community::Partition;
use crate::error::{Error, Result};

/// `rows x cols` node counts: `counts[u][v]` nodes in community `u` of the
/// first partition and `v` of the second.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContingencyTable {
    pub counts: Vec<Vec<u64>>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub total: u64,
}

impl ContingencyTable {
    pub fn new(a: &Partition, b: &Partition) -> Result<Self> {
        if a.nodes() != b.nodes() {
            return Err(Error::PartitionMismatch(
                "partitions are over different node sets".into(),
            ));
        }
        let mut counts = vec![vec![0u64; b.community_count()]; a.community_count()];
        for (&u, &v) in a.assignment().iter().zip(b.assignment()) {
            counts[u][v] += 1;
        }
        let row_sums = counts.iter().map(|r| r.iter().sum()).collect();
        let mut col_sums = vec![0u64; b.community_count()];
        for r in &counts {
            for (s, &c) in col_sums.iter_mut().zip(r) {
                *s += c;
            }
        }
        Ok(ContingencyTable {
            counts,
            row_sums,
            col_sums,
            total: a.len() as u64,
        })
    }

    pub fn rows(&self) -> usize {
        self.counts.len()
    }

    pub fn cols(&self) -> usize {
        self.col_sums.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    /// Share of nodes on the optimal one-to-one label matching, in percent.
    pub similarity_pct: f64,
    pub nmi: f64,
    pub ari: f64,
    /// Matched `(row, col)` label pairs.
    pub matching: Vec<(usize, usize)>,
    pub contingency: ContingencyTable,
}

pub fn compare_partitions(a: &Partition, b: &Partition) -> Result<Comparison> {
    let t = ContingencyTable::new(a, b)?;
    let (matched, matching) = max_matching(&t.counts);
    let similarity_pct = if t.total == 0 {
        100.0
    } else {
        100.0 * matched as f64 / t.total as f64
    };
    Ok(Comparison {
        similarity_pct,
        nmi: normalized_mutual_information(&t),
        ari: adjusted_rand_index(&t),
        matching,
        contingency: t,
    })
}

/// Maximum-weight one-to-one matching of rows to columns (Hungarian
/// method on the zero-padded square matrix). Returns the matched total and
/// the pairs that carry a real row and column.
pub fn max_matching(weights: &[Vec<u64>]) -> (u64, Vec<(usize, usize)>) {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    let n = rows.max(cols);
    if n == 0 {
        return (0, Vec::new());
    }
    let top = weights.iter().flatten().copied().max().unwrap_or(0) as i64;
    let cost = |i: usize, j: usize| -> i64 {
        let w = if i < rows && j < cols { weights[i][j] as i64 } else { 0 };
        top - w
    };

    // potentials and matching, 1-based with 0 as the virtual column
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![i64::MAX; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut pairs = Vec::new();
    let mut total = 0;
    for j in 1..=n {
        let (r, c) = (p[j] - 1, j - 1);
        if r < rows && c < cols {
            total += weights[r][c];
            pairs.push((r, c));
        }
    }
    pairs.sort_unstable();
    (total, pairs)
}

fn entropy(sums: &[u64], n: f64) -> f64 {
    sums.iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = s as f64 / n;
            -p * libm::log(p)
        })
        .sum()
}

/// NMI with natural logarithms, normalised by the arithmetic mean of the
/// two entropies. Two single-community partitions score 1.
pub fn normalized_mutual_information(t: &ContingencyTable) -> f64 {
    if t.total == 0 {
        return 1.0;
    }
    let n = t.total as f64;
    let ha = entropy(&t.row_sums, n);
    let hb = entropy(&t.col_sums, n);
    if ha == 0.0 && hb == 0.0 {
        return 1.0;
    }
    // a relabelling: I equals both entropies, but the sums round differently
    let bijective = t.counts.iter().enumerate().all(|(u, row)| {
        row.iter()
            .enumerate()
            .all(|(v, &c)| c == 0 || (c == t.row_sums[u] && c == t.col_sums[v]))
    });
    if bijective {
        return 1.0;
    }
    let mut mi = 0.0;
    for (u, row) in t.counts.iter().enumerate() {
        for (v, &c) in row.iter().enumerate() {
            if c > 0 {
                let c = c as f64;
                mi += c / n * libm::log(c * n / (t.row_sums[u] as f64 * t.col_sums[v] as f64));
            }
        }
    }
    let nmi = 2.0 * mi / (ha + hb);
    nmi.clamp(0.0, 1.0)
}

fn pairs(x: u64) -> f64 {
    let x = x as f64;
    x * (x - 1.0) / 2.0
}

/// Adjusted Rand index (Hubert–Arabie). Returns 1 when the expected and
/// maximal indices coincide, which happens for identical trivial partitions.
pub fn adjusted_rand_index(t: &ContingencyTable) -> f64 {
    let index: f64 = t.counts.iter().flatten().map(|&c| pairs(c)).sum();
    let sa: f64 = t.row_sums.iter().map(|&c| pairs(c)).sum();
    let sb: f64 = t.col_sums.iter().map(|&c| pairs(c)).sum();
    let total = pairs(t.total);
    if total == 0.0 {
        return 1.0;
    }
    let expected = sa * sb / total;
    let max = 0.5 * (sa + sb);
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeId;

    fn part(labels: &[usize]) -> Partition {
        let nodes = (0..labels.len() as u64).map(NodeId).collect();
        Partition::from_assignment(nodes, labels).unwrap()
    }

    /// Brute force over all injective label maps.
    fn brute_matching(w: &[Vec<u64>]) -> u64 {
        fn go(w: &[Vec<u64>], row: usize, used: &mut Vec<bool>) -> u64 {
            if row == w.len() {
                return 0;
            }
            let mut best = go(w, row + 1, used);
            for c in 0..used.len() {
                if !used[c] {
                    used[c] = true;
                    best = best.max(w[row][c] + go(w, row + 1, used));
                    used[c] = false;
                }
            }
            best
        }
        let cols = w.first().map_or(0, Vec::len);
        go(w, 0, &mut vec![false; cols])
    }

    #[test]
    fn identity_and_permutation() {
        let a = part(&[0, 0, 1, 1, 2, 2, 2]);
        for b in [a.clone(), a.relabeled(&[2, 0, 1]).unwrap()] {
            let c = compare_partitions(&a, &b).unwrap();
            assert_eq!(c.similarity_pct, 100.0);
            assert_eq!(c.nmi, 1.0);
            assert_eq!(c.ari, 1.0);
        }
    }

    #[test]
    fn known_ari_and_nmi() {
        // reference values from the closed forms, evaluated by hand:
        // contingency [[2,1],[0,3]], n = 6
        let a = part(&[0, 0, 0, 1, 1, 1]);
        let b = part(&[0, 0, 1, 1, 1, 1]);
        let c = compare_partitions(&a, &b).unwrap();
        // index = C(2,2)+C(3,2) = 4; sa = 6; sb = 1+6 = 7; total = 15
        let expected = 6.0 * 7.0 / 15.0;
        let ari = (4.0 - expected) / (6.5 - expected);
        assert!((c.ari - ari).abs() < 1e-12);
        assert!((c.similarity_pct - 500.0 / 6.0).abs() < 1e-12);
        assert!(c.nmi > 0.0 && c.nmi < 1.0);
    }

    #[test]
    fn matching_against_brute_force() {
        let tables = [
            vec![vec![5, 1, 0], vec![4, 4, 0]],
            vec![vec![1, 9], vec![8, 2], vec![3, 3]],
            vec![vec![0, 0, 7, 1], vec![2, 6, 6, 0], vec![3, 3, 3, 3]],
        ];
        for t in &tables {
            assert_eq!(max_matching(t).0, brute_matching(t));
        }
    }

    #[test]
    fn unmatched_surplus_labels_score_zero() {
        let a = part(&[0, 0, 1, 1]);
        let b = part(&[0, 1, 2, 3]);
        let c = compare_partitions(&a, &b).unwrap();
        assert_eq!(c.similarity_pct, 50.0);
    }

    #[test]
    fn different_universes_rejected() {
        let a = part(&[0, 1]);
        let b = part(&[0, 1, 1]);
        assert!(compare_partitions(&a, &b).is_err());
    }

    #[test]
    fn trivial_partitions() {
        let a = part(&[0, 0, 0]);
        let c = compare_partitions(&a, &a).unwrap();
        assert_eq!((c.nmi, c.ari, c.similarity_pct), (1.0, 1.0, 100.0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn permutation_invariant(labels in prop::collection::vec(0usize..5, 1..30), seed: u64) {
                use rand::seq::SliceRandom;
                let a = part(&labels);
                let mut perm: Vec<usize> = (0..a.community_count()).collect();
                perm.shuffle(&mut crate::rng::rng_from(seed));
                let b = a.relabeled(&perm).unwrap();
                let other = part(&labels.iter().map(|l| (l * 7 + 3) % 4).collect::<Vec<_>>());
                let x = compare_partitions(&a, &other).unwrap();
                let y = compare_partitions(&b, &other).unwrap();
                prop_assert_eq!(x.similarity_pct, y.similarity_pct);
                prop_assert!((x.nmi - y.nmi).abs() < 1e-12);
                prop_assert!((x.ari - y.ari).abs() < 1e-12);
            }

            #[test]
            fn relabelled_scores_exactly_one(labels in prop::collection::vec(0usize..9, 1..200), seed: u64) {
                use rand::seq::SliceRandom;
                let a = part(&labels);
                let mut perm: Vec<usize> = (0..a.community_count()).collect();
                perm.shuffle(&mut crate::rng::rng_from(seed));
                let c = compare_partitions(&a, &a.relabeled(&perm).unwrap()).unwrap();
                prop_assert_eq!((c.similarity_pct, c.nmi, c.ari), (100.0, 1.0, 1.0));
            }

            #[test]
            fn matching_is_optimal(t in prop::collection::vec(prop::collection::vec(0u64..20, 3), 1..5)) {
                prop_assert_eq!(max_matching(&t).0, brute_matching(&t));
            }
        }
    }
}
