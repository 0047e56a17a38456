//! Command-line front end. [`run`] parses arguments, executes one
//! subcommand and returns the process exit code.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use subcity_core::centrality::{
    centrality_vs_distance, group_stats, CentralityResult, EdgeLength, EigenConfig, Measure,
};
use subcity_core::community::{
    compare_partitions, louvain, run_config, LouvainResult, SweepTable, VisitOrder,
};
use subcity_core::geo::{distances_to_center, CenterMethod, Hemisphere};
use subcity_core::graph::Variant;
use subcity_core::segregation::{build_flow_table, FlowCounting, NullModel, SegregationTable};
use subcity_core::synth::{generate, SynthSpec};
use subcity_core::{Graph, NodeId, OdRecord};

use crate::ingest::{self, IngestError, LabeledPartition, NodeMeta};
use crate::{export, parallel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<subcity_core::Error> for CliError {
    fn from(e: subcity_core::Error) -> Self {
        if e.is_input() {
            CliError::Input(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "subcity", version, about = "Community structure, centrality and segregation of commuter networks")]
#[command(propagate_version = true)]
pub struct Cli {
    /// Worker threads (0 picks one per core). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Repeat for more log output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Add lat/lon to a node table holding UTM coordinates.
    Convert(ConvertArgs),
    /// Aggregate OD records into a graph and report its size.
    Build(BuildArgs),
    /// Louvain community detection at one resolution.
    Detect(DetectArgs),
    /// Community counts over a list of resolutions.
    Sweep(SweepArgs),
    /// Similarity, NMI and ARI between two partitions.
    Compare(CompareArgs),
    /// Betweenness or eigenvector centrality with per-community statistics.
    Centrality(CentralityArgs),
    /// Distance to the city centre against centrality scores.
    GeoStats(GeoStatsArgs),
    /// Flow probabilities between communities against a null model.
    Segregation(SegregationArgs),
    /// Generate a planted-partition city.
    Synth(SynthArgs),
    /// Write GeoJSON or DOT for mapping and graph tools.
    Export(ExportArgs),
}

#[derive(Debug, Args, Default)]
pub struct VariantArgs {
    /// Keep home -> work direction (default).
    #[arg(long, conflicts_with = "undirected")]
    pub directed: bool,
    #[arg(long)]
    pub undirected: bool,
    /// Edge weight = commuter count (default).
    #[arg(long, conflicts_with = "unweighted")]
    pub weighted: bool,
    #[arg(long)]
    pub unweighted: bool,
}

impl VariantArgs {
    pub fn variant(&self) -> Variant {
        Variant::new(!self.undirected, !self.unweighted)
    }

    fn any(&self) -> bool {
        self.directed || self.undirected || self.weighted || self.unweighted
    }
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// OD records: home_id,work_id or Source,Target, optional count.
    #[arg(long)]
    pub edges: PathBuf,
    /// Node table; its ids are added to the graph, isolated or not.
    #[arg(long)]
    pub nodes: Option<PathBuf>,
    #[command(flatten)]
    pub variant: VariantArgs,
}

#[derive(Debug, Clone, Copy)]
pub struct HemisphereArg(pub Hemisphere);

fn parse_hemisphere(s: &str) -> Result<HemisphereArg, String> {
    match s.to_ascii_uppercase().as_str() {
        "N" | "NORTH" => Ok(HemisphereArg(Hemisphere::North)),
        "S" | "SOUTH" => Ok(HemisphereArg(Hemisphere::South)),
        _ => Err(format!("expected N or S, got {s:?}")),
    }
}

#[derive(Debug, Args)]
pub struct ZoneArgs {
    /// UTM zone for rows without a zone column.
    #[arg(long, default_value_t = 19, value_parser = clap::value_parser!(u8).range(1..=60))]
    pub zone: u8,
    #[arg(long, default_value = "S", value_parser = parse_hemisphere)]
    pub hemisphere: HemisphereArg,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long)]
    pub nodes: PathBuf,
    #[command(flatten)]
    pub zone: ZoneArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Aggregated edges as Source,Target,weight.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OrderArg {
    Ascending,
    Shuffled,
}

impl From<OrderArg> for VisitOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Ascending => VisitOrder::Ascending,
            OrderArg::Shuffled => VisitOrder::Shuffled,
        }
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Larger values give fewer communities.
    #[arg(long, default_value_t = 1.0)]
    pub resolution: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent runs; the one with the highest modularity is kept.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
    #[arg(long, value_enum, default_value = "ascending")]
    pub order: OrderArg,
    /// Partition as id,community.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub nodes: Option<PathBuf>,
    /// Sweep a single variant. Without these flags both the directed and
    /// the undirected weighted networks are swept.
    #[command(flatten)]
    pub variant: VariantArgs,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1.0,1.5,2.0")]
    pub resolutions: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
    #[arg(long, value_enum, default_value = "shuffled")]
    pub order: OrderArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    /// Summary line; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Contingency matrix, rows from `--a`, columns from `--b`.
    #[arg(long)]
    pub contingency: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MeasureArg {
    Betweenness,
    Eigenvector,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LengthArg {
    /// Every edge has length 1.
    Unit,
    /// Edge length 1/weight.
    Inverse,
}

#[derive(Debug, Args)]
pub struct CentralityArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum)]
    pub measure: MeasureArg,
    #[arg(long, value_enum, default_value = "unit")]
    pub length: LengthArg,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    /// Mix in a uniform 0.15 teleport (eigenvector only). The result is no
    /// longer an eigenvector score.
    #[arg(long)]
    pub teleport: bool,
    #[arg(long)]
    pub partition: Option<PathBuf>,
    /// Scores as id,<measure>.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Mean and median per community.
    #[arg(long, requires = "partition")]
    pub stats: Option<PathBuf>,
    /// Quartiles, fences, whiskers and outliers per community.
    #[arg(long, requires = "partition")]
    pub boxplot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CenterArg {
    /// Mean of latitudes and of longitudes.
    Mean,
    /// Normalised mean of unit vectors.
    Spherical,
}

#[derive(Debug, Args)]
pub struct GeoStatsArgs {
    #[arg(long)]
    pub nodes: PathBuf,
    /// Score files written by `centrality`; may be repeated.
    #[arg(long)]
    pub scores: Vec<PathBuf>,
    #[command(flatten)]
    pub zone: ZoneArgs,
    #[arg(long, value_enum, default_value = "mean")]
    pub center: CenterArg,
    /// Per-node distance and scores.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// 2x2 correlation matrix per score file.
    #[arg(long)]
    pub correlation: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum NullArg {
    Analytic,
    Montecarlo,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CountingArg {
    /// Sum commuter counts.
    Records,
    /// Count each distinct home/work pair once.
    Pairs,
}

#[derive(Debug, Args)]
pub struct SegregationArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub partition: PathBuf,
    #[arg(long, value_enum, default_value = "analytic")]
    pub null: NullArg,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "records")]
    pub counting: CountingArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Number of planted communities.
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    /// Nodes per community.
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    #[arg(long, default_value_t = 0.3)]
    pub p_in: f64,
    #[arg(long, default_value_t = 0.01)]
    pub p_out: f64,
    /// Mean commuter count per flow, at least 1.
    #[arg(long, default_value_t = 2.0)]
    pub mean_count: f64,
    /// Gaussian spread of nodes around their block centre, metres.
    #[arg(long, default_value_t = 2500.0)]
    pub spread: f64,
    /// Radius of the ring of block centres, metres.
    #[arg(long, default_value_t = 12000.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_edges: PathBuf,
    #[arg(long)]
    pub out_nodes: PathBuf,
    #[arg(long)]
    pub out_truth: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Geojson,
    Dot,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long, value_enum)]
    pub format: FormatArg,
    /// Needed for DOT.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Needed for GeoJSON.
    #[arg(long)]
    pub nodes: Option<PathBuf>,
    #[arg(long)]
    pub partition: PathBuf,
    #[command(flatten)]
    pub variant: VariantArgs,
    #[command(flatten)]
    pub zone: ZoneArgs,
    #[arg(long)]
    pub betweenness: Option<PathBuf>,
    #[arg(long)]
    pub eigenvector: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parse `argv` (program name first), run, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    init_logging(cli.verbose);
    let threads = cli.threads;
    let outcome = parallel::with_threads(threads, move || dispatch(&cli.command))
        .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))
        .and_then(|r| r);
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .try_init();
}

pub fn dispatch(cmd: &Command) -> CliResult {
    match cmd {
        Command::Convert(a) => convert(a),
        Command::Build(a) => build(a),
        Command::Detect(a) => detect(a),
        Command::Sweep(a) => sweep(a),
        Command::Compare(a) => compare(a),
        Command::Centrality(a) => centrality(a),
        Command::GeoStats(a) => geo_stats(a),
        Command::Segregation(a) => segregation(a),
        Command::Synth(a) => synth(a),
        Command::Export(a) => export_cmd(a),
    }
}

fn runtime<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Write to the named file, or stdout when none was given.
fn emit(text: &str, out: Option<&Path>) -> CliResult {
    match out {
        Some(p) => ingest::write_string(text, p).map_err(runtime),
        None => {
            use std::io::Write;
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(runtime)
        }
    }
}

fn load_graph(edges: &Path, nodes: Option<&Path>, extra: &[NodeId], variant: Variant) -> CliResult<(Vec<OdRecord>, Graph)> {
    let records = ingest::read_edges(edges)?;
    let mut ids: Vec<NodeId> = extra.to_vec();
    if let Some(n) = nodes {
        ids.extend(ingest::read_nodes(n)?.iter().map(|m| m.id));
    }
    let g = Graph::from_records(&records, ids, variant)?;
    log::info!("{variant} graph: {} nodes, {} edges, total weight {}", g.node_count(), g.edge_count(), g.total_weight());
    Ok((records, g))
}

fn located(metas: &[NodeMeta], z: &ZoneArgs) -> CliResult<Vec<(NodeId, Option<subcity_core::geo::GeoPoint>)>> {
    metas
        .iter()
        .map(|m| Ok((m.id, m.resolve_geo(z.zone, z.hemisphere.0)?)))
        .collect()
}

fn convert(a: &ConvertArgs) -> CliResult {
    let mut metas = ingest::read_nodes(&a.nodes)?;
    for m in &mut metas {
        m.geo = m.resolve_geo(a.zone.zone, a.zone.hemisphere.0)?;
        if m.geo.is_none() {
            return Err(CliError::Input(format!("node {} has neither UTM nor lat/lon coordinates", m.id)));
        }
    }
    ingest::write_nodes_with_geo(&metas, &a.out).map_err(runtime)
}

fn build(a: &BuildArgs) -> CliResult {
    let v = a.graph.variant.variant();
    let (_, g) = load_graph(&a.graph.edges, a.graph.nodes.as_deref(), &[], v)?;
    if let Some(out) = &a.out {
        let mut s = String::from("Source,Target,weight\n");
        let nodes = g.nodes();
        for e in g.edges() {
            writeln!(s, "{},{},{}", nodes[e.source], nodes[e.target], e.weight).unwrap();
        }
        ingest::write_string(&s, out).map_err(runtime)?;
    }
    let mut s = String::from("directed,weighted,nodes,edges,total_weight\n");
    writeln!(s, "{},{},{},{},{}", v.directed, v.weighted, g.node_count(), g.edge_count(), g.total_weight()).unwrap();
    emit(&s, None)
}

/// Best run by modularity; ties go to the lowest run index.
pub fn best_of_runs(g: &Graph, resolution: f64, seed: u64, runs: usize, order: VisitOrder) -> CliResult<(usize, LouvainResult)> {
    let results = (0..runs)
        .into_par_iter()
        .map(|run| louvain(g, &run_config(resolution, seed, run, order)?))
        .collect::<subcity_core::Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.modularity > results[best].modularity {
            best = i;
        }
    }
    let r = results.into_iter().nth(best).expect("at least one run");
    Ok((best, r))
}

fn detect(a: &DetectArgs) -> CliResult {
    let v = a.graph.variant.variant();
    let (_, g) = load_graph(&a.graph.edges, a.graph.nodes.as_deref(), &[], v)?;
    let (run, r) = best_of_runs(&g, a.resolution, a.seed, a.runs as usize, a.order.into())?;
    let mut s = String::from("id,community\n");
    for (n, c) in r.partition.nodes().iter().zip(r.partition.assignment()) {
        writeln!(s, "{n},{c}").unwrap();
    }
    match &a.out {
        Some(out) => {
            ingest::write_string(&s, out).map_err(runtime)?;
            let mut summary = String::from("resolution,run,communities,modularity\n");
            writeln!(summary, "{},{},{},{}", a.resolution, run, r.partition.community_count(), r.modularity).unwrap();
            emit(&summary, None)
        }
        None => emit(&s, None),
    }
}

fn network_name(v: Variant) -> String {
    v.to_string().replace(' ', "_")
}

/// Resolution rows with four columns per network, then `average` and `std`
/// rows over the median counts.
pub fn sweep_csv(resolutions: &[f64], tables: &[(Variant, SweepTable)]) -> String {
    let mut s = String::from("resolution");
    for (v, _) in tables {
        let n = network_name(*v);
        write!(s, ",{n}_communities,{n}_min,{n}_max,{n}_modularity").unwrap();
    }
    s.push('\n');
    for (i, r) in resolutions.iter().enumerate() {
        write!(s, "{r}").unwrap();
        for (_, t) in tables {
            let row = &t.rows[i];
            write!(s, ",{},{},{},{}", row.median, row.min, row.max, row.best_modularity).unwrap();
        }
        s.push('\n');
    }
    for (label, pick) in [("average", 0), ("std", 1)] {
        s.push_str(label);
        for (_, t) in tables {
            let v = if pick == 0 { t.mean_count } else { t.std_count };
            write!(s, ",{v},,,").unwrap();
        }
        s.push('\n');
    }
    s
}

fn sweep(a: &SweepArgs) -> CliResult {
    let variants = if a.variant.any() {
        vec![a.variant.variant()]
    } else {
        vec![Variant::DIRECTED_WEIGHTED, Variant::UNDIRECTED_WEIGHTED]
    };
    for &r in &a.resolutions {
        subcity_core::community::QualityParams::new(r)?;
    }
    let records = ingest::read_edges(&a.edges)?;
    let extra: Vec<NodeId> = match &a.nodes {
        Some(n) => ingest::read_nodes(n)?.iter().map(|m| m.id).collect(),
        None => Vec::new(),
    };
    let mut tables = Vec::new();
    for v in variants {
        let g = Graph::from_records(&records, extra.iter().copied(), v)?;
        let t = parallel::resolution_sweep(&g, &a.resolutions, a.seed, a.runs as usize, a.order.into())?;
        tables.push((v, t));
    }
    emit(&sweep_csv(&a.resolutions, &tables), a.out.as_deref())
}

fn compare(a: &CompareArgs) -> CliResult {
    let pa = ingest::read_partition(&a.a)?;
    let pb = ingest::read_partition(&a.b)?;
    let c = compare_partitions(&pa.partition, &pb.partition)?;
    let mut s = String::from("similarity_pct,nmi,ari,communities_a,communities_b,nodes\n");
    writeln!(
        s,
        "{},{},{},{},{},{}",
        c.similarity_pct,
        c.nmi,
        c.ari,
        pa.partition.community_count(),
        pb.partition.community_count(),
        pa.partition.len()
    )
    .unwrap();
    emit(&s, a.out.as_deref())?;
    if let Some(path) = &a.contingency {
        let mut m = String::from("community");
        for l in &pb.labels {
            write!(m, ",{l}").unwrap();
        }
        m.push('\n');
        for (l, row) in pa.labels.iter().zip(&c.contingency.counts) {
            m.push_str(l);
            for v in row {
                write!(m, ",{v}").unwrap();
            }
            m.push('\n');
        }
        ingest::write_string(&m, path).map_err(runtime)?;
    }
    Ok(())
}

pub fn scores_csv(r: &CentralityResult) -> String {
    let mut s = format!("id,{}\n", r.measure.name());
    for (n, v) in r.nodes.iter().zip(&r.scores) {
        writeln!(s, "{n},{v}").unwrap();
    }
    s
}

fn centrality(a: &CentralityArgs) -> CliResult {
    let v = a.graph.variant.variant();
    let partition = a.partition.as_deref().map(ingest::read_partition).transpose()?;
    let (_, g) = load_graph(&a.graph.edges, a.graph.nodes.as_deref(), &[], v)?;
    let res = match a.measure {
        MeasureArg::Betweenness => {
            let length = match a.length {
                LengthArg::Unit => EdgeLength::Unit,
                LengthArg::Inverse => EdgeLength::InverseWeight,
            };
            parallel::betweenness(&g, length)?
        }
        MeasureArg::Eigenvector => {
            let cfg = EigenConfig {
                tol: a.tol,
                max_iter: a.max_iter,
                damping: a.teleport.then_some(0.15),
            };
            parallel::eigenvector(&g, &cfg)?
        }
    };
    log::info!("{}: {}", res.measure.name(), res.normalization);
    if let (Some(l), Some(it)) = (res.eigenvalue, res.iterations) {
        log::info!("eigenvalue {l} after {it} iterations");
    }
    if let Some(w) = &res.warning {
        log::warn!("{w}");
    }
    emit(&scores_csv(&res), a.out.as_deref())?;

    if let Some(lp) = &partition {
        let groups = group_stats(&res, &lp.partition)?;
        if let Some(path) = &a.stats {
            let mut s = String::from("community,count,mean,median\n");
            for gs in &groups {
                writeln!(s, "{},{},{},{}", lp.labels[gs.community], gs.count, gs.mean, gs.median).unwrap();
            }
            ingest::write_string(&s, path).map_err(runtime)?;
        }
        if let Some(path) = &a.boxplot {
            let mut s = String::from(
                "community,count,q1,median,q3,lower_fence,upper_fence,whisker_low,whisker_high,outliers\n",
            );
            for gs in &groups {
                let outliers: Vec<String> = gs.outliers.iter().map(|n| n.to_string()).collect();
                writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{}",
                    lp.labels[gs.community],
                    gs.count,
                    gs.q1,
                    gs.median,
                    gs.q3,
                    gs.lower_fence,
                    gs.upper_fence,
                    gs.whisker_low,
                    gs.whisker_high,
                    outliers.join(";")
                )
                .unwrap();
            }
            ingest::write_string(&s, path).map_err(runtime)?;
        }
    }
    Ok(())
}

fn read_scores_as_result(path: &Path) -> CliResult<CentralityResult> {
    let (name, rows) = ingest::read_scores(path)?;
    let measure = match name.as_str() {
        "betweenness" => Measure::Betweenness,
        "eigenvector" => Measure::Eigenvector,
        other => {
            return Err(CliError::Input(format!(
                "{}: unknown score column `{other}`",
                path.display()
            )))
        }
    };
    Ok(CentralityResult {
        measure,
        nodes: rows.iter().map(|r| r.0).collect(),
        scores: rows.iter().map(|r| r.1).collect(),
        normalization: String::from("as read"),
        eigenvalue: None,
        iterations: None,
        warning: None,
    })
}

fn geo_stats(a: &GeoStatsArgs) -> CliResult {
    let metas = ingest::read_nodes(&a.nodes)?;
    let method = match a.center {
        CenterArg::Mean => CenterMethod::Mean,
        CenterArg::Spherical => CenterMethod::Spherical,
    };
    let table = distances_to_center(&located(&metas, &a.zone)?, method)?;
    let scores = a
        .scores
        .iter()
        .map(|p| read_scores_as_result(p))
        .collect::<CliResult<Vec<_>>>()?;
    let mut correlations = Vec::new();
    for s in &scores {
        correlations.push((s.measure, centrality_vs_distance(s, &table)?));
    }
    log::info!("centre at {}, {}", table.center.lat, table.center.lon);

    let mut out = String::from("id,lat,lon,distance_km");
    for s in &scores {
        write!(out, ",{}", s.measure.name()).unwrap();
    }
    out.push('\n');
    for (i, (n, p)) in table.nodes.iter().zip(&table.points).enumerate() {
        write!(out, "{n},{},{},{}", ingest::format_coord(p.lat), ingest::format_coord(p.lon), table.distances[i]).unwrap();
        for s in &scores {
            write!(out, ",{}", s.scores[i]).unwrap();
        }
        out.push('\n');
    }
    emit(&out, a.out.as_deref())?;

    if let Some(path) = &a.correlation {
        let mut m = String::from("measure,variable,distance_km,score\n");
        for (measure, c) in &correlations {
            let mx = c.matrix()?;
            writeln!(m, "{},distance_km,{},{}", measure.name(), mx[0][0], mx[0][1]).unwrap();
            writeln!(m, "{},score,{},{}", measure.name(), mx[1][0], mx[1][1]).unwrap();
        }
        ingest::write_string(&m, path).map_err(runtime)?;
    }
    Ok(())
}

pub fn segregation_csv(t: &SegregationTable, labels: &[String]) -> String {
    let mut s = String::from("source_comm,target_comm,count,joint_p,cond_p,expected_p,segregated\n");
    for c in t.cells() {
        writeln!(
            s,
            "{},{},{},{},{},{},{}",
            labels[c.source], labels[c.target], c.count, c.joint, c.conditional, c.expected, c.segregated
        )
        .unwrap();
    }
    s
}

fn segregation(a: &SegregationArgs) -> CliResult {
    let lp = ingest::read_partition(&a.partition)?;
    let records = ingest::read_edges(&a.edges)?;
    let counting = match a.counting {
        CountingArg::Records => FlowCounting::Records,
        CountingArg::Pairs => FlowCounting::DistinctPairs,
    };
    let flows = build_flow_table(&records, &lp.partition, counting)?;
    let mode = match a.null {
        NullArg::Analytic => NullModel::Analytic,
        NullArg::Montecarlo => NullModel::MonteCarlo {
            trials: a.trials,
            seed: a.seed,
        },
    };
    let null = parallel::null_expected(&flows, mode)?;
    let t = SegregationTable::new(flows, null)?;
    emit(&segregation_csv(&t, &lp.labels), a.out.as_deref())
}

fn synth(a: &SynthArgs) -> CliResult {
    let spec = SynthSpec {
        communities: a.k,
        nodes_per_community: a.n,
        p_in: a.p_in,
        p_out: a.p_out,
        mean_count: a.mean_count,
        spread_m: a.spread,
        ring_radius_m: a.radius,
        seed: a.seed,
        ..SynthSpec::default()
    };
    let city = generate(&spec)?;
    ingest::write_edges(&city.records, &a.out_edges).map_err(runtime)?;
    let hemi = match spec.hemisphere {
        Hemisphere::North => "N",
        Hemisphere::South => "S",
    };
    let mut s = String::from("id,easting,northing,zone,hemisphere\n");
    for site in &city.sites {
        writeln!(s, "{},{},{},{},{hemi}", site.id, site.easting, site.northing, spec.zone).unwrap();
    }
    ingest::write_string(&s, &a.out_nodes).map_err(runtime)?;
    let mut t = String::from("id,community\n");
    for (n, c) in city.planted.nodes().iter().zip(city.planted.assignment()) {
        writeln!(t, "{n},{c}").unwrap();
    }
    ingest::write_string(&t, &a.out_truth).map_err(runtime)
}

fn export_cmd(a: &ExportArgs) -> CliResult {
    let lp: LabeledPartition = ingest::read_partition(&a.partition)?;
    let mut scores = Vec::new();
    for path in [&a.betweenness, &a.eigenvector].into_iter().flatten() {
        scores.push(read_scores_as_result(path)?);
    }
    let text = match a.format {
        FormatArg::Geojson => {
            let nodes = a
                .nodes
                .as_deref()
                .ok_or_else(|| CliError::Input("GeoJSON export needs --nodes".into()))?;
            let metas = ingest::read_nodes(nodes)?;
            let pts = located(&metas, &a.zone)?
                .into_iter()
                .map(|(id, p)| p.map(|p| (id, p)).ok_or(subcity_core::Error::MissingCoordinates(id)))
                .collect::<subcity_core::Result<Vec<_>>>()?;
            let refs: Vec<&CentralityResult> = scores.iter().collect();
            export::geojson(&pts, &lp.partition, &refs)?
        }
        FormatArg::Dot => {
            let edges = a
                .edges
                .as_deref()
                .ok_or_else(|| CliError::Input("DOT export needs --edges".into()))?;
            let (_, g) = load_graph(edges, a.nodes.as_deref(), lp.partition.nodes(), a.variant.variant())?;
            export::dot(&g, &lp.partition)?
        }
    };
    emit(&text, a.out.as_deref())
}
