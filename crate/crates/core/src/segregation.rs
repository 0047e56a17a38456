//! Community-to-community commuter flows and the segregation test.
//!
//! `P_X(Y)` is the share of commuters living in community `X` who work in
//! `Y`. Under the null model, work places are handed out at random, which
//! makes the expected share the target marginal `n_.Y / N` for every `X`.
//! A pair is segregated when the observed share strictly exceeds it.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::OdRecord;
use crate::rng;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum FlowCounting {
    /// Sum commuter counts over records.
    #[default]
    Records,
    /// Count each distinct `(home, work)` pair once.
    DistinctPairs,
}

/// `k x k` flow counts between communities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowTable {
    pub counts: Vec<Vec<u64>>,
    pub total: u64,
}

impl FlowTable {
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self> {
        let k = counts.len();
        if counts.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidArgument("flow table must be square".into()));
        }
        let total = counts.iter().flatten().sum();
        Ok(FlowTable { counts, total })
    }

    pub fn size(&self) -> usize {
        self.counts.len()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        let mut s = vec![0u64; self.size()];
        for r in &self.counts {
            for (acc, &c) in s.iter_mut().zip(r) {
                *acc += c;
            }
        }
        s
    }

    /// `p(X, Y) = n_XY / N`.
    pub fn joint(&self) -> Vec<Vec<f64>> {
        let n = self.total as f64;
        self.counts
            .iter()
            .map(|r| r.iter().map(|&c| if n > 0.0 { c as f64 / n } else { 0.0 }).collect())
            .collect()
    }
}

pub fn build_flow_table(
    records: &[OdRecord],
    p: &Partition,
    counting: FlowCounting,
) -> Result<FlowTable> {
    let k = p.community_count();
    let mut counts = vec![vec![0u64; k]; k];
    let mut seen = BTreeSet::new();
    for r in records {
        let x = p.community_of(r.source).ok_or(Error::UnassignedNode(r.source))?;
        let y = p.community_of(r.target).ok_or(Error::UnassignedNode(r.target))?;
        match counting {
            FlowCounting::Records => counts[x][y] += r.count,
            FlowCounting::DistinctPairs => {
                if seen.insert((r.source, r.target)) {
                    counts[x][y] += 1;
                }
            }
        }
    }
    FlowTable::from_counts(counts)
}

/// `P_X(Y) = n_XY / n_X.`; every source row must carry flow.
pub fn conditional_table(t: &FlowTable) -> Result<Vec<Vec<f64>>> {
    t.counts
        .iter()
        .enumerate()
        .map(|(x, row)| {
            let total: u64 = row.iter().sum();
            if total == 0 {
                return Err(Error::EmptyRow(x));
            }
            Ok(row.iter().map(|&c| c as f64 / total as f64).collect())
        })
        .collect()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum NullModel {
    Analytic,
    MonteCarlo { trials: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NullExpectation {
    /// `E[P_X(Y)]`, rows by source community.
    pub expected: Vec<Vec<f64>>,
    /// Standard error of each Monte Carlo cell mean.
    pub std_error: Option<Vec<Vec<f64>>>,
    pub trials: usize,
}

/// Analytic null: `E[P_X(Y)] = n_.Y / N` for every `X`.
pub fn analytic_null(t: &FlowTable) -> Result<Vec<Vec<f64>>> {
    if t.total == 0 {
        return Err(Error::InvalidArgument("flow table is empty".into()));
    }
    let n = t.total as f64;
    let marginal: Vec<f64> = t.col_sums().iter().map(|&c| c as f64 / n).collect();
    Ok(vec![marginal; t.size()])
}

/// Commuter-level permutation null. Every commuter keeps their home
/// community; the multiset of work communities is shuffled.
pub struct PermutationNull {
    k: usize,
    sources: Vec<usize>,
    targets: Vec<usize>,
    row_totals: Vec<f64>,
    seed: u64,
}

impl PermutationNull {
    pub fn new(t: &FlowTable, seed: u64) -> Result<Self> {
        let k = t.size();
        let mut sources = Vec::with_capacity(t.total as usize);
        let mut targets = Vec::with_capacity(t.total as usize);
        for (x, row) in t.counts.iter().enumerate() {
            for (y, &c) in row.iter().enumerate() {
                for _ in 0..c {
                    sources.push(x);
                    targets.push(y);
                }
            }
        }
        let row_totals = t.row_sums().iter().map(|&c| c as f64).collect::<Vec<_>>();
        if let Some(x) = row_totals.iter().position(|&c| c == 0.0) {
            return Err(Error::EmptyRow(x));
        }
        Ok(PermutationNull {
            k,
            sources,
            targets,
            row_totals,
            seed,
        })
    }

    /// Conditional table of trial `index`, seeded independently of the
    /// other trials.
    pub fn trial(&self, index: usize) -> Vec<Vec<f64>> {
        let mut rng = rng::rng_from(rng::derive_seed(self.seed, "segregation-null", index as u64));
        let mut targets = self.targets.clone();
        targets.shuffle(&mut rng);
        let mut counts = vec![vec![0u64; self.k]; self.k];
        for (&x, &y) in self.sources.iter().zip(&targets) {
            counts[x][y] += 1;
        }
        counts
            .iter()
            .zip(&self.row_totals)
            .map(|(row, &tot)| row.iter().map(|&c| c as f64 / tot).collect())
            .collect()
    }

    /// Mean and standard error over trials, folded in the given order.
    pub fn combine(&self, trials: impl IntoIterator<Item = Vec<Vec<f64>>>) -> Result<NullExpectation> {
        let mut sum = vec![vec![0.0; self.k]; self.k];
        let mut sq = vec![vec![0.0; self.k]; self.k];
        let mut count = 0usize;
        for m in trials {
            for x in 0..self.k {
                for y in 0..self.k {
                    sum[x][y] += m[x][y];
                    sq[x][y] += m[x][y] * m[x][y];
                }
            }
            count += 1;
        }
        if count == 0 {
            return Err(Error::InvalidArgument("Monte Carlo null needs at least one trial".into()));
        }
        let n = count as f64;
        let mut se = vec![vec![0.0; self.k]; self.k];
        for x in 0..self.k {
            for y in 0..self.k {
                sum[x][y] /= n;
                if count > 1 {
                    let var = ((sq[x][y] - n * sum[x][y] * sum[x][y]) / (n - 1.0)).max(0.0);
                    se[x][y] = libm::sqrt(var / n);
                }
            }
        }
        Ok(NullExpectation {
            expected: sum,
            std_error: Some(se),
            trials: count,
        })
    }
}

pub fn null_expected(t: &FlowTable, mode: NullModel) -> Result<NullExpectation> {
    match mode {
        NullModel::Analytic => Ok(NullExpectation {
            expected: analytic_null(t)?,
            std_error: None,
            trials: 0,
        }),
        NullModel::MonteCarlo { trials, seed } => {
            if trials < 1 {
                return Err(Error::InvalidArgument("Monte Carlo null needs at least one trial".into()));
            }
            let null = PermutationNull::new(t, seed)?;
            null.combine((0..trials).map(|i| null.trial(i)))
        }
    }
}

/// `P_X(Y) > E[P_X(Y)]`, strictly.
pub fn classify_segregated(conditional: &[Vec<f64>], expected: &[Vec<f64>]) -> Vec<Vec<bool>> {
    conditional
        .iter()
        .zip(expected)
        .map(|(c, e)| c.iter().zip(e).map(|(p, q)| p > q).collect())
        .collect()
}

/// Everything the segregation report prints, cell by cell.
#[derive(Clone, Debug, PartialEq)]
pub struct SegregationTable {
    pub flows: FlowTable,
    pub joint: Vec<Vec<f64>>,
    pub conditional: Vec<Vec<f64>>,
    pub null: NullExpectation,
    pub segregated: Vec<Vec<bool>>,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SegregationCell {
    pub source: usize,
    pub target: usize,
    pub count: u64,
    pub joint: f64,
    pub conditional: f64,
    pub expected: f64,
    pub segregated: bool,
}

impl SegregationTable {
    pub fn new(flows: FlowTable, null: NullExpectation) -> Result<Self> {
        let conditional = conditional_table(&flows)?;
        let segregated = classify_segregated(&conditional, &null.expected);
        Ok(SegregationTable {
            joint: flows.joint(),
            flows,
            conditional,
            null,
            segregated,
        })
    }

    /// Row-major cells.
    pub fn cells(&self) -> Vec<SegregationCell> {
        let k = self.flows.size();
        let mut out = Vec::with_capacity(k * k);
        for x in 0..k {
            for y in 0..k {
                out.push(SegregationCell {
                    source: x,
                    target: y,
                    count: self.flows.counts[x][y],
                    joint: self.joint[x][y],
                    conditional: self.conditional[x][y],
                    expected: self.null.expected[x][y],
                    segregated: self.segregated[x][y],
                });
            }
        }
        out
    }
}
