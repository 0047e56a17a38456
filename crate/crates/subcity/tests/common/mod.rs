//! Independent reference implementations shared by the integration tests.
//! Everything here works on dense matrices straight from the records and
//! never touches the library's graph internals.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::Rng;
use subcity_core::rng::Rng as ChaCha;
use subcity_core::OdRecord;

/// Records over nodes `0..n` with each ordered pair present with
/// probability `density`, counts in `1..=max_count`, optional self-loops.
pub fn random_records(rng: &mut ChaCha, n: usize, density: f64, max_count: u64, loops: bool) -> Vec<OdRecord> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if (i == j && !loops) || !rng.random_bool(density) {
                continue;
            }
            // occasionally split a flow over two records
            let c = rng.random_range(1..=max_count);
            if c > 1 && rng.random_bool(0.3) {
                out.push(OdRecord::new(i as u64, j as u64, 1));
                out.push(OdRecord::new(i as u64, j as u64, c - 1));
            } else {
                out.push(OdRecord::new(i as u64, j as u64, c));
            }
        }
    }
    out
}

/// Dense adjacency with `sum_ij A_ij = M` (`2m` undirected, `m` directed).
/// Undirected self-loops sit on the diagonal with twice their weight.
pub fn dense(records: &[OdRecord], n: usize, directed: bool, weighted: bool) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; n]; n];
    if weighted {
        for r in records {
            let (s, t, w) = (r.source.0 as usize, r.target.0 as usize, r.count as f64);
            if directed {
                a[s][t] += w;
            } else if s == t {
                a[s][s] += 2.0 * w;
            } else {
                a[s][t] += w;
                a[t][s] += w;
            }
        }
    } else {
        let pairs: BTreeSet<(usize, usize)> = records
            .iter()
            .map(|r| {
                let (s, t) = (r.source.0 as usize, r.target.0 as usize);
                if directed { (s, t) } else { (s.min(t), s.max(t)) }
            })
            .collect();
        for (s, t) in pairs {
            if directed {
                a[s][t] = 1.0;
            } else if s == t {
                a[s][s] = 2.0;
            } else {
                a[s][t] = 1.0;
                a[t][s] = 1.0;
            }
        }
    }
    a
}

/// `Q = (1/M) sum_ij [A_ij - gamma k_i^out k_j^in / M] delta(c_i, c_j)`.
pub fn modularity(a: &[Vec<f64>], labels: &[usize], gamma: f64) -> f64 {
    let n = a.len();
    let total: f64 = a.iter().flatten().sum();
    if total == 0.0 {
        return 0.0;
    }
    let kout: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    let kin: Vec<f64> = (0..n).map(|j| (0..n).map(|i| a[i][j]).sum()).collect();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += a[i][j] - gamma * kout[i] * kin[j] / total;
            }
        }
    }
    q / total
}

/// Every set partition of `0..n` as a restricted growth string.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=max + 1 {
            prefix.push(c);
            go(prefix, n, max.max(c), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut prefix = vec![0];
    go(&mut prefix, n, 0, &mut out);
    out
}

/// Best modularity over all set partitions.
pub fn optimum(a: &[Vec<f64>], gamma: f64) -> (f64, Vec<usize>) {
    set_partitions(a.len())
        .into_iter()
        .map(|p| (modularity(a, &p, gamma), p))
        .fold((f64::NEG_INFINITY, Vec::new()), |best, cur| if cur.0 > best.0 { cur } else { best })
}

/// Normalised betweenness by enumeration: Floyd–Warshall distances, then
/// shortest-path counts `sigma_st`, then the pair sum over `s != v != t`.
/// `len[i][j]` is the arc length, `None` when there is no arc.
pub fn brute_betweenness(len: &[Vec<Option<f64>>], directed: bool) -> Vec<f64> {
    let n = len.len();
    let inf = f64::INFINITY;
    let mut d = vec![vec![inf; n]; n];
    for i in 0..n {
        d[i][i] = 0.0;
        for j in 0..n {
            if i != j {
                if let Some(l) = len[i][j] {
                    d[i][j] = d[i][j].min(l);
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * x.abs().max(1.0);
    // sigma[s][t]: number of shortest s-t paths, by increasing distance
    let mut sigma = vec![vec![0.0f64; n]; n];
    for s in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&t| d[s][t].is_finite()).collect();
        order.sort_by(|&x, &y| d[s][x].partial_cmp(&d[s][y]).unwrap());
        sigma[s][s] = 1.0;
        for &t in &order {
            if t == s {
                continue;
            }
            let mut c = 0.0;
            for u in 0..n {
                if u != t && d[s][u].is_finite() {
                    if let Some(l) = len[u][t] {
                        if close(d[s][u] + l, d[s][t]) {
                            c += sigma[s][u];
                        }
                    }
                }
            }
            sigma[s][t] = c;
        }
    }
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t || !d[s][t].is_finite() || (!directed && t < s) {
                continue;
            }
            for v in 0..n {
                if v != s && v != t && d[s][v].is_finite() && d[v][t].is_finite() && close(d[s][v] + d[v][t], d[s][t]) {
                    b[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
                }
            }
        }
    }
    if n < 3 {
        return vec![0.0; n];
    }
    let pairs = ((n - 1) * (n - 2)) as f64 / if directed { 1.0 } else { 2.0 };
    b.iter().map(|x| x / pairs).collect()
}

/// Arc lengths from a dense adjacency (self-loops dropped).
pub fn lengths(a: &[Vec<f64>], inverse: bool) -> Vec<Vec<Option<f64>>> {
    a.iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, &w)| (i != j && w > 0.0).then(|| if inverse { 1.0 / w } else { 1.0 }))
                .collect()
        })
        .collect()
}

/// `(lat, lon, easting, northing)` rows of the zone 19 S reference grid.
pub fn utm_oracle() -> Vec<[f64; 4]> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/utm_oracle.txt");
    std::fs::read_to_string(path)
        .expect("oracle file")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let v: Vec<f64> = l.split_whitespace().map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3]]
        })
        .collect()
}

/// Directory holding the real OD data (`edges.csv`, `Communities.csv`),
/// taken from `SUBCITY_SANTIAGO_DIR`.
pub fn santiago_dir() -> Option<PathBuf> {
    let dir = PathBuf::from(std::env::var_os("SUBCITY_SANTIAGO_DIR")?);
    (dir.join("edges.csv").is_file() && dir.join("Communities.csv").is_file()).then_some(dir)
}

pub fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_subcity"))
}
