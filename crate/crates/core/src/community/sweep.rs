use alloc::vec::Vec;

use crate::community::{louvain, LouvainConfig, LouvainResult, VisitOrder};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::derive_seed;
use crate::stats;

/// One resolution of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub resolution: f64,
    /// Community count of every run, in run order.
    pub counts: Vec<usize>,
    pub min: usize,
    pub median: f64,
    pub max: usize,
    pub best_modularity: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Mean of the median counts down the resolution column.
    pub mean_count: f64,
    /// Population standard deviation of the median counts.
    pub std_count: f64,
}

/// Seed of run `run`. Independent of the resolution so repeated resolutions
/// reproduce identical rows.
pub fn run_seed(seed: u64, run: usize) -> u64 {
    derive_seed(seed, "sweep-run", run as u64)
}

/// Summarise the runs of one resolution, given the result of every run.
pub fn summarize_runs(resolution: f64, runs: &[LouvainResult]) -> SweepRow {
    let counts: Vec<usize> = runs.iter().map(|r| r.partition.community_count()).collect();
    let as_f: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    SweepRow {
        resolution,
        min: counts.iter().copied().min().unwrap_or(0),
        max: counts.iter().copied().max().unwrap_or(0),
        median: stats::median(&as_f).unwrap_or(0.0),
        best_modularity: runs
            .iter()
            .map(|r| r.modularity)
            .fold(f64::NEG_INFINITY, f64::max),
        counts,
    }
}

/// Louvain configuration of run `run` at `resolution`.
pub fn run_config(resolution: f64, seed: u64, run: usize, order: VisitOrder) -> Result<LouvainConfig> {
    Ok(LouvainConfig::new(resolution)?
        .seed(run_seed(seed, run))
        .order(order))
}

/// All runs at one resolution, sequentially.
pub fn sweep_row(
    g: &Graph,
    resolution: f64,
    seed: u64,
    runs: usize,
    order: VisitOrder,
) -> Result<SweepRow> {
    if runs == 0 {
        return Err(Error::InvalidArgument("runs must be at least 1".into()));
    }
    let results = (0..runs)
        .map(|run| louvain(g, &run_config(resolution, seed, run, order)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize_runs(resolution, &results))
}

/// Assemble the table and its column statistics from finished rows.
pub fn assemble_table(rows: Vec<SweepRow>) -> SweepTable {
    let medians: Vec<f64> = rows.iter().map(|r| r.median).collect();
    SweepTable {
        mean_count: stats::mean(&medians).unwrap_or(0.0),
        std_count: stats::population_std(&medians).unwrap_or(0.0),
        rows,
    }
}

/// Run Louvain `runs` times per resolution and tabulate community counts.
pub fn resolution_sweep(
    g: &Graph,
    resolutions: &[f64],
    seed: u64,
    runs: usize,
    order: VisitOrder,
) -> Result<SweepTable> {
    if resolutions.is_empty() {
        return Err(Error::InvalidArgument("no resolutions given".into()));
    }
    let rows = resolutions
        .iter()
        .map(|&r| sweep_row(g, r, seed, runs, order))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_table(rows))
}
