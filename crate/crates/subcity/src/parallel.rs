//! Rayon drivers for the core algorithms. Every function here returns the
//! same bits as its sequential counterpart in `subcity_core`, whatever the
//! pool size: work is split freely but always folded in a fixed order.

use rayon::prelude::*;

use subcity_core::centrality::{
    self, in_edge_product, normalize_betweenness, BrandesWorkspace, CentralityResult, EdgeLength,
    EigenConfig,
};
use subcity_core::community::{
    assemble_table, louvain, run_config, summarize_runs, SweepRow, SweepTable, VisitOrder,
};
use subcity_core::segregation::{FlowTable, NullExpectation, NullModel, PermutationNull};
use subcity_core::{Error, Graph, Result};

/// Sources handled per batch; bounds the memory held by dependency vectors.
const SOURCE_BATCH: usize = 256;

pub fn betweenness(g: &Graph, length: EdgeLength) -> Result<CentralityResult> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let n = g.node_count();
    let mut raw = vec![0.0; n];
    if n >= 3 {
        for start in (0..n).step_by(SOURCE_BATCH) {
            let end = (start + SOURCE_BATCH).min(n);
            let deps: Vec<Vec<f64>> = (start..end)
                .into_par_iter()
                .map_init(
                    || BrandesWorkspace::new(n),
                    |ws, s| ws.dependencies(g, s, length).to_vec(),
                )
                .collect();
            for d in deps {
                for (acc, x) in raw.iter_mut().zip(d) {
                    *acc += x;
                }
            }
        }
    }
    Ok(normalize_betweenness(g, length, raw))
}

pub fn eigenvector(g: &Graph, cfg: &EigenConfig) -> Result<CentralityResult> {
    centrality::eigenvector_with(g, cfg, |x, y| {
        y.par_iter_mut()
            .enumerate()
            .for_each(|(i, yi)| *yi = in_edge_product(g, i, x));
    })
}

pub fn sweep_row(g: &Graph, resolution: f64, seed: u64, runs: usize, order: VisitOrder) -> Result<SweepRow> {
    if runs == 0 {
        return Err(Error::InvalidArgument("runs must be at least 1".into()));
    }
    let results = (0..runs)
        .into_par_iter()
        .map(|run| louvain(g, &run_config(resolution, seed, run, order)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize_runs(resolution, &results))
}

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

pub fn null_expected(t: &FlowTable, mode: NullModel) -> Result<NullExpectation> {
    match mode {
        NullModel::Analytic => subcity_core::segregation::null_expected(t, mode),
        NullModel::MonteCarlo { trials, seed } => {
            if trials < 1 {
                return Err(Error::InvalidArgument("Monte Carlo null needs at least one trial".into()));
            }
            let null = PermutationNull::new(t, seed)?;
            let tables: Vec<_> = (0..trials).into_par_iter().map(|i| null.trial(i)).collect();
            null.combine(tables)
        }
    }
}

/// Run `f` on a dedicated pool of `threads` workers (0 = rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> std::result::Result<T, rayon::ThreadPoolBuildError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    Ok(pool.install(f))
}
