//! Command-line driver: loads a graph, replays an update stream through the
//! chosen structure and writes a JSON report.
//!
//! Exit codes: 0 ok, 1 usage or input error, 2 invariant violation,
//! 3 oracle mismatch.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::graph::{AppliedUpdate, DynamicMultiGraph, VertexId};
use crate::hierarchy::{Hierarchy, HierarchyConfig};
use crate::io::{self, Line, ParseError, Query, StreamItem, StreamUpdate};
use crate::jtree::{collection_quality, JTreeCollection, MwuConfig};
use crate::oracle::{self, OracleGraph, ENUM_BUDGET, PARTITION_BUDGET};
use crate::queries::{self, QueryReport};
use crate::report::{ratio, to_f64, write_csv, Exact, QueryRecord, RatioRow, RunReport, Timings, UpdateRecord};
use crate::sparsifier::{CutSparsifier, SparsifierConfig};
use crate::verify::{self, Suite, Updates, VerifyParams};
use crate::workload::{connected_erdos_renyi, random_update, UpdateMix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "dyncut", version, about = "Dynamic cut sparsifiers, j-trees and cut queries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maintain a cut sparsifier over an update stream.
    Sparsify(SparsifyArgs),
    /// Maintain a collection of j-trees over an update stream.
    Jtrees(JtreeArgs),
    /// Maintain the j-tree hierarchy and answer the stream's queries.
    Hierarchy(HierarchyArgs),
    /// Run oracle-backed verification suites.
    Verify(VerifyArgs),
    /// Time hierarchy runs on random graphs and tabulate query ratios.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Graph file (`n m` header, then `u v cap` lines).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Update stream.
    #[arg(long)]
    pub stream: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Check invariants while replaying and fail on the first broken one.
    #[arg(long)]
    pub strict: bool,
    /// Strict-mode sampling period in updates.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub check_every: u64,
    /// Add wall-clock timings; reports are no longer byte-reproducible.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SparsifierFlags {
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1.0)]
    pub cxi: f64,
    #[arg(long, default_value_t = 1)]
    pub cap_scale: i128,
}

impl SparsifierFlags {
    fn config(&self, seed: u64) -> SparsifierConfig {
        SparsifierConfig { epsilon: self.epsilon, c_xi: self.cxi, cap_scale: self.cap_scale, seed, ..Default::default() }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MwuFlags {
    /// Starting congestion threshold; measured from a low-stretch tree when absent.
    #[arg(long)]
    pub gamma_init: Option<f64>,
    #[arg(long, default_value_t = 32)]
    pub mwu_iterations: usize,
}

impl MwuFlags {
    fn config(&self) -> MwuConfig {
        MwuConfig { gamma_init: self.gamma_init, max_iterations: self.mwu_iterations }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SparsifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub sparsifier: SparsifierFlags,
    /// Write the final sparsifier in graph-file format.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct JtreeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 4)]
    pub j: usize,
    #[command(flatten)]
    pub mwu: MwuFlags,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HierarchyFlags {
    #[arg(long, default_value_t = 1)]
    pub levels: usize,
    #[arg(long, default_value_t = 8)]
    pub j: usize,
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    #[arg(long, default_value_t = 2.0)]
    pub rebuild_c: f64,
    #[command(flatten)]
    pub sparsifier: SparsifierFlags,
    #[command(flatten)]
    pub mwu: MwuFlags,
}

impl HierarchyFlags {
    fn config(&self, seed: u64) -> HierarchyConfig {
        HierarchyConfig {
            levels: self.levels,
            j: self.j,
            samples: self.samples,
            rebuild_c: self.rebuild_c,
            seed,
            epsilon: self.sparsifier.epsilon,
            c_xi: self.sparsifier.cxi,
            cap_scale: self.sparsifier.cap_scale,
            mwu: self.mwu.config(),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HierarchyArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub hierarchy: HierarchyFlags,
    /// Witness labels beyond this many vertices are dropped from the report.
    #[arg(long, default_value_t = 64)]
    pub witness_limit: usize,
    /// CSV table of query values against oracles.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Independent seeds per suite.
    #[arg(long, default_value_t = 3)]
    pub runs: u64,
    /// Random updates per run when no stream is given.
    #[arg(long, default_value_t = 40)]
    pub updates: usize,
    /// Size of generated graphs when no graph is given.
    #[arg(long, default_value_t = 9)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub bundle_depth: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub seeds: u64,
    #[arg(long, default_value_t = 50)]
    pub updates: usize,
    #[arg(long, default_value_t = 5)]
    pub queries: usize,
    #[command(flatten)]
    pub hierarchy: HierarchyFlags,
    /// CSV table of min-cut ratios.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("line {line}: {msg}")]
    Input { line: usize, msg: String },
    #[error("{path}: {source}")]
    Write { path: String, source: std::io::Error },
}

/// Finished run: the report and the exit code it implies.
pub struct Outcome {
    pub report: RunReport,
    pub code: i32,
}

/// Parses `args`, runs the command and writes its outputs.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli.command) {
        Ok(o) => {
            let out = common(&cli.command).out.clone();
            if let Err(e) = emit(out, &o.report.to_json()) {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            for v in o.report.violations.iter().chain(&o.report.mismatches).take(10) {
                eprintln!("{v}");
            }
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn common(c: &Command) -> &Common {
    match c {
        Command::Sparsify(a) => &a.common,
        Command::Jtrees(a) => &a.common,
        Command::Hierarchy(a) => &a.common,
        Command::Verify(a) => &a.common,
        Command::Bench(a) => &a.common,
    }
}

fn emit(path: Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(&p, text).map_err(|source| CliError::Write { path: p.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(c: &Command) -> Result<Outcome, CliError> {
    let report = match c {
        Command::Sparsify(a) => sparsify(a)?,
        Command::Jtrees(a) => jtrees(a)?,
        Command::Hierarchy(a) => hierarchy(a)?,
        Command::Verify(a) => verify(a)?,
        Command::Bench(a) => bench(a)?,
    };
    let code = if !report.mismatches.is_empty() {
        EXIT_ORACLE
    } else if !report.violations.is_empty() {
        EXIT_INVARIANT
    } else {
        EXIT_OK
    };
    Ok(Outcome { report, code })
}

struct Loaded {
    graph: DynamicMultiGraph,
    stream: Vec<Line<StreamItem>>,
}

fn load(c: &Common) -> Result<Loaded, CliError> {
    let path = c.graph.as_ref().ok_or_else(|| CliError::Usage("--graph is required".into()))?;
    let graph = io::read_graph(path)?;
    let stream = match &c.stream {
        Some(p) => io::read_stream(p)?,
        None => Vec::new(),
    };
    Ok(Loaded { graph, stream })
}

fn start(command: &str, c: &Common, config: impl Serialize, l: &Loaded) -> RunReport {
    let mut r = RunReport::new(command, c.seed, config);
    r.input.vertices = l.graph.vertex_count();
    r.input.edges = l.graph.edge_count();
    r.input.stream_items = l.stream.len();
    r
}

fn kind(u: &AppliedUpdate) -> &'static str {
    match u {
        AppliedUpdate::Inserted { .. } => "insert",
        AppliedUpdate::Deleted { .. } => "delete",
        AppliedUpdate::Split(_) => "split",
        AppliedUpdate::VertexAdded(_) => "vertex",
    }
}

fn sampled(c: &Common, index: usize) -> bool {
    c.strict && (index as u64 + 1) % c.check_every == 0
}

fn sparsify(a: &SparsifyArgs) -> Result<RunReport, CliError> {
    let l = load(&a.common)?;
    let mut report = start("sparsify", &a.common, a, &l);
    let t0 = Instant::now();
    let mut sp = CutSparsifier::new(&l.graph, a.sparsifier.config(a.common.seed)).map_err(|e| CliError::Usage(e.to_string()))?;
    let build = t0.elapsed();
    let initial = sp.total_recourse();
    let t1 = Instant::now();
    let mut skipped = 0;
    for Line { line, item } in &l.stream {
        let StreamItem::Update(u) = item else {
            skipped += 1;
            continue;
        };
        let req = u.resolve(sp.graph()).map_err(|e| CliError::Input { line: *line, msg: e.to_string() })?;
        let (applied, rec) = sp.update(&req).map_err(|e| CliError::Input { line: *line, msg: e.to_string() })?;
        let index = report.updates.len();
        if sampled(&a.common, index) {
            let mut bad = Vec::new();
            if !rec.within_bounds(&applied, sp.level_count(), sp.bundle_depth()) {
                bad.push("class recourse exceeds bounds");
            }
            if !sp.capacity_ratio_ok() {
                bad.push("capacity ratio above bound");
            }
            if sp.edge_count() > sp.edge_budget() {
                bad.push("output edges over budget");
            }
            if !sp.coin_ledger_consistent() {
                bad.push("coin ledger out of sync");
            }
            if !sp.class_decomposition_exact() {
                bad.push("class decomposition wrong");
            }
            report.violations.extend(bad.into_iter().map(|b| format!("line {line}: {b}")));
        }
        report.updates.push(UpdateRecord {
            index,
            line: *line,
            kind: kind(&applied),
            output_edges: sp.edge_count(),
            recourse: (rec.inserted + rec.deleted + rec.recapacitated) as u64,
            detail: json!({ "inserted": rec.inserted, "deleted": rec.deleted, "recapacitated": rec.recapacitated }),
        });
    }
    let g = sp.graph();
    let out_edges = sp.edges();
    // Class pieces of one input edge add back up to its capacity.
    let mut summed: std::collections::BTreeMap<crate::graph::EdgeHandle, crate::graph::Capacity> = Default::default();
    for (k, _, _, c) in &out_edges {
        *summed.entry(k.edge).or_default() += *c;
    }
    let same = summed.len() == g.edge_count() && summed.iter().all(|(h, c)| g.capacity(*h) == Some(*c));
    report.summary = json!({
        "output_edges": sp.edge_count(),
        "edge_budget": sp.edge_budget(),
        "levels": sp.level_count(),
        "bundle_depth": sp.bundle_depth(),
        "classes": sp.class_count(),
        "initial_recourse": initial,
        "update_recourse": sp.total_recourse() - initial,
        "edge_set_recourse": sp.edge_set_recourse(),
        "coin_draws": sp.coin_draws(),
        "output_equals_input": same,
        "queries_skipped": skipped,
        "moved_edges": g.counters().moved_edges,
    });
    if let Some(p) = &a.dump {
        let edges: Vec<_> = out_edges.iter().map(|(_, u, v, c)| (u.index(), v.index(), *c)).collect();
        emit(Some(p.clone()), &io::format_graph(g.vertex_bound(), &edges))?;
    }
    if a.common.timings {
        report.timings = Some(Timings { build_ms: ms(build), updates_ms: ms(t1.elapsed()), queries_ms: 0.0 });
    }
    Ok(report)
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn jtrees(a: &JtreeArgs) -> Result<RunReport, CliError> {
    let l = load(&a.common)?;
    let mut report = start("jtrees", &a.common, a, &l);
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    let mut g = l.graph.clone();
    let t0 = Instant::now();
    let mut coll = JTreeCollection::build(&g, a.j, &a.mwu.config(), &mut rng);
    let build = t0.elapsed();
    let alpha0 = collection_quality(&g, &coll.instances);
    let t1 = Instant::now();
    let mut skipped = 0;
    for Line { line, item } in &l.stream {
        let StreamItem::Update(u) = item else {
            skipped += 1;
            continue;
        };
        let req = u.resolve(&g).map_err(|e| CliError::Input { line: *line, msg: e.to_string() })?;
        let (applied, logs) = coll.apply(&mut g, &req).map_err(|e| CliError::Input { line: *line, msg: e.to_string() })?;
        let index = report.updates.len();
        if sampled(&a.common, index) {
            let n = g.vertex_bound();
            let dense: Vec<_> = g.edges().map(|(_, r)| (r.u.index(), r.v.index(), r.cap)).collect();
            let og = (n <= ENUM_BUDGET).then(|| OracleGraph::new(n, &dense));
            for (i, inst) in coll.instances.iter().enumerate() {
                let forest: Vec<usize> = g.edges().enumerate().filter(|(_, (h, _))| inst.in_forest(*h)).map(|(k, _)| k).collect();
                let mut core: Vec<_> = inst
                    .core()
                    .edges()
                    .map(|(_, r)| {
                        let (x, y) = (inst.root_of_core(r.u), inst.root_of_core(r.v));
                        (x.min(y), x.max(y), r.cap)
                    })
                    .collect();
                core.sort();
                if core != oracle::contract(n, &dense, &forest, &inst.roots()) {
                    report.mismatches.push(format!("line {line}: instance {i} core differs from the contracted graph"));
                }
                if let Some(og) = &og {
                    let oh = OracleGraph::new(n, &inst.materialize());
                    if oracle::all_cuts(n).any(|m| oh.cut_value_mask(m) < og.cut_value_mask(m)) {
                        report.mismatches.push(format!("line {line}: instance {i} undercuts the input"));
                    }
                }
            }
        }
        report.updates.push(UpdateRecord {
            index,
            line: *line,
            kind: kind(&applied),
            output_edges: coll.instances.iter().map(|i| i.core().edge_count()).sum(),
            recourse: logs.iter().map(|l| l.len() as u64).sum(),
            detail: json!({ "roots": coll.instances.iter().map(|i| i.root_count()).collect::<Vec<_>>() }),
        });
    }
    report.summary = json!({
        "instances": coll.len(),
        "trees_built": coll.built,
        "gamma": coll.gamma,
        "escalations": coll.escalations,
        "max_roots": coll.max_roots(),
        "quality_initial": Exact::from(alpha0),
        "quality_final": Exact::from(collection_quality(&g, &coll.instances)),
        "queries_skipped": skipped,
    });
    if a.common.timings {
        report.timings = Some(Timings { build_ms: ms(build), updates_ms: ms(t1.elapsed()), queries_ms: 0.0 });
    }
    Ok(report)
}

fn vertex(g: &DynamicMultiGraph, line: usize, x: u32) -> Result<VertexId, CliError> {
    let v = VertexId(x);
    if g.has_vertex(v) {
        Ok(v)
    } else {
        Err(CliError::Input { line, msg: format!("unknown vertex {x}") })
    }
}

fn query_text(q: &Query) -> String {
    match q {
        Query::MinCut { s, t } => format!("ST {s} {t}"),
        Query::SparsestCut => "SC".into(),
        Query::Multiway { terminals } => format!("MWC {} {}", terminals.len(), join(terminals.iter())),
        Query::Multicut { pairs } => format!("MC {} {}", pairs.len(), join(pairs.iter().flat_map(|p| [p.0, p.1]).collect::<Vec<_>>().iter())),
    }
}

fn join<'a>(xs: impl Iterator<Item = &'a u32>) -> String {
    xs.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Answers one query and compares it with the brute-force optimum when the
/// graph is within the oracle budget.
fn answer(h: &mut Hierarchy, q: &Query, line: usize) -> Result<(QueryReport, Option<crate::graph::Capacity>), CliError> {
    let g = h.graph().clone();
    let n = g.vertex_bound();
    let err = |e: queries::QueryError| CliError::Input { line, msg: e.to_string() };
    let dense: Vec<_> = g.edges().map(|(_, r)| (r.u.index(), r.v.index(), r.cap)).collect();
    let og = OracleGraph::new(n, &dense);
    let live = n == g.vertex_count();
    Ok(match q {
        Query::MinCut { s, t } => {
            let (s, t) = (vertex(&g, line, *s)?, vertex(&g, line, *t)?);
            let rep = queries::min_cut(h, s, t).map_err(err)?;
            (rep, Some(oracle::max_flow(&og, s.index(), t.index()).0))
        }
        Query::SparsestCut => {
            let rep = queries::sparsest_cut(h).map_err(err)?;
            let w: Vec<u64> = (0..n).map(|v| g.has_vertex(VertexId(v as u32)) as u64).collect();
            let exact = (n <= ENUM_BUDGET).then(|| oracle::sparsest_cut(&og, &w)).flatten().map(|x| x.0);
            (rep, exact)
        }
        Query::Multiway { terminals } => {
            let ts = terminals.iter().map(|&t| vertex(&g, line, t)).collect::<Result<Vec<_>, _>>()?;
            let rep = queries::multiway_cut(h, &ts).map_err(err)?;
            let idx: Vec<usize> = ts.iter().map(|t| t.index()).collect();
            (rep, (n <= PARTITION_BUDGET && live).then(|| oracle::multiway_cut(&og, &idx).0))
        }
        Query::Multicut { pairs } => {
            let ps = pairs.iter().map(|&(a, b)| Ok((vertex(&g, line, a)?, vertex(&g, line, b)?))).collect::<Result<Vec<_>, CliError>>()?;
            let rep = queries::multicut(h, &ps).map_err(err)?;
            let idx: Vec<(usize, usize)> = ps.iter().map(|p| (p.0.index(), p.1.index())).collect();
            (rep, (n <= PARTITION_BUDGET && live).then(|| oracle::multicut(&og, &idx).0))
        }
    })
}

fn hierarchy(a: &HierarchyArgs) -> Result<RunReport, CliError> {
    let l = load(&a.common)?;
    let mut report = start("hierarchy", &a.common, a, &l);
    let t0 = Instant::now();
    let mut h = Hierarchy::new(&l.graph, a.hierarchy.config(a.common.seed)).map_err(|e| CliError::Usage(e.to_string()))?;
    let build = t0.elapsed();
    let (mut upd_t, mut q_t) = (std::time::Duration::ZERO, std::time::Duration::ZERO);
    let mut rows = Vec::new();
    let mut rebuild_events = Vec::new();
    for Line { line, item } in &l.stream {
        match item {
            StreamItem::Update(u) => {
                let t = Instant::now();
                let req = u.resolve(h.graph()).map_err(|e| CliError::Input { line: *line, msg: e.to_string() })?;
                let (applied, rep) = h.update(&req).map_err(|e| CliError::Input { line: *line, msg: e.to_string() })?;
                upd_t += t.elapsed();
                let index = report.updates.len();
                if let Some(lvl) = rep.rebuilt {
                    rebuild_events.push(json!({ "update": index, "level": lvl }));
                }
                if sampled(&a.common, index) {
                    if let Err(e) = h.validate() {
                        report.violations.push(format!("line {line}: {e}"));
                    }
                }
                report.updates.push(UpdateRecord {
                    index,
                    line: *line,
                    kind: kind(&applied),
                    output_edges: h.sparsifier(0, 0).edge_count(),
                    recourse: rep.recourse.iter().sum(),
                    detail: serde_json::to_value(&rep).expect("report serializes"),
                });
            }
            StreamItem::Query(q) => {
                let t = Instant::now();
                let (rep, exact) = answer(&mut h, q, *line)?;
                q_t += t.elapsed();
                let text = query_text(q);
                if let (Query::MinCut { .. }, Some(x)) = (q, exact) {
                    if rep.value < x {
                        report.mismatches.push(format!("line {line}: min cut {} below exact {x}", rep.value));
                    }
                }
                let r = exact.and_then(|x| ratio(rep.value, x));
                rows.push(RatioRow { config: format!("L={} j={} s={}", a.hierarchy.levels, a.hierarchy.j, a.hierarchy.samples), seed: a.common.seed, n: h.graph().vertex_count(), query: text.clone(), reported: to_f64(rep.value), exact: exact.map(to_f64), ratio: r });
                let truncated = rep.witness.len() > a.witness_limit;
                report.queries.push(QueryRecord {
                    line: *line,
                    query: text,
                    value: rep.value.into(),
                    witness_value: rep.witness_value.into(),
                    per_chain: rep.per_chain.iter().map(|v| v.map(Exact::from)).collect(),
                    chain: rep.chain,
                    witness: rep.witness.into_iter().take(a.witness_limit).collect(),
                    witness_truncated: truncated,
                    oracle: exact.map(Exact::from),
                    ratio: r,
                });
            }
        }
    }
    report.summary = json!({
        "level_sizes": h.level_sizes(),
        "nodes": (0..=h.level_count()).map(|i| h.node_count(i)).collect::<Vec<_>>(),
        "chains": h.leaf_count(),
        "rebuilds": h.rebuilds(),
        "rebuild_events": rebuild_events,
        "updates": h.updates(),
        "max_core": (1..=h.level_count()).map(|i| h.max_core(i)).collect::<Vec<_>>(),
        "moved_edges": h.graph().counters().moved_edges,
    });
    if let Some(p) = &a.csv {
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).map_err(|e| CliError::Usage(e.to_string()))?;
        emit(Some(p.clone()), &String::from_utf8(buf).expect("csv is utf-8"))?;
    }
    if a.common.timings {
        report.timings = Some(Timings { build_ms: ms(build), updates_ms: ms(upd_t), queries_ms: ms(q_t) });
    }
    Ok(report)
}

fn verify(a: &VerifyArgs) -> Result<RunReport, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    let graph = match &a.common.graph {
        Some(p) => io::read_graph(p)?,
        None => connected_erdos_renyi(a.n, 0.4, 3, &mut rng),
    };
    let updates = match &a.common.stream {
        Some(p) => Updates::Stream(
            io::read_stream(p)?
                .into_iter()
                .filter_map(|l| match l.item {
                    StreamItem::Update(u) => Some(u),
                    StreamItem::Query(_) => None,
                })
                .collect::<Vec<StreamUpdate>>(),
        ),
        None => Updates::Random { count: a.updates, mix: UpdateMix { max_cap: 3, max_vertices: graph.vertex_count() + 4, ..Default::default() } },
    };
    let l = Loaded { graph, stream: Vec::new() };
    let mut report = start("verify", &a.common, a, &l);
    let params = VerifyParams { bundle_depth: a.bundle_depth, ..Default::default() };
    let seeds = (0..a.runs).map(|r| a.common.seed.wrapping_add(r));
    let results = verify::run_many(a.suite, &l.graph, &updates, &params, seeds).map_err(CliError::Usage)?;
    for r in &results {
        report.mismatches.extend(r.mismatches.iter().map(|m| format!("{}: {m}", r.suite)));
        report.violations.extend(r.violations.iter().map(|m| format!("{}: {m}", r.suite)));
    }
    report.summary = json!({
        "suites": results.iter().map(|r| json!({ "suite": r.suite, "updates": r.updates, "checks": r.checks, "mismatches": r.mismatches.len(), "violations": r.violations.len() })).collect::<Vec<_>>(),
        "checks": results.iter().map(|r| r.checks).sum::<u64>(),
    });
    Ok(report)
}

fn bench(a: &BenchArgs) -> Result<RunReport, CliError> {
    let l = Loaded { graph: DynamicMultiGraph::new(), stream: Vec::new() };
    let mut report = start("bench", &a.common, a, &l);
    let mut rows = Vec::new();
    let mut runs = Vec::new();
    for &n in &a.sizes {
        for s in 0..a.seeds {
            let seed = a.common.seed.wrapping_add(s);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = (4.0 * (n as f64).ln() / n as f64).min(1.0);
            let g = connected_erdos_renyi(n, p, 4, &mut rng);
            let t0 = Instant::now();
            let mut h = Hierarchy::new(&g, a.hierarchy.config(seed)).map_err(|e| CliError::Usage(e.to_string()))?;
            let build = t0.elapsed();
            let mix = UpdateMix { max_cap: 4, max_vertices: n + n / 4, ..Default::default() };
            let t1 = Instant::now();
            let mut recourse = 0u64;
            for _ in 0..a.updates {
                let u = random_update(h.graph(), &mix, &mut rng);
                let (_, rep) = h.update(&u).map_err(|e| CliError::Usage(e.to_string()))?;
                recourse += rep.recourse.iter().sum::<u64>();
            }
            let upd = t1.elapsed();
            let t2 = Instant::now();
            let mut worst: f64 = 1.0;
            for _ in 0..a.queries {
                let vs: Vec<VertexId> = h.graph().vertices().collect();
                let st: Vec<VertexId> = vs.choose_multiple(&mut rng, 2).copied().collect();
                let q = Query::MinCut { s: st[0].0, t: st[1].0 };
                let (rep, exact) = answer(&mut h, &q, 0)?;
                let r = exact.and_then(|x| ratio(rep.value, x));
                if let Some(x) = exact {
                    if rep.value < x {
                        report.mismatches.push(format!("n={n} seed={seed}: min cut {} below exact {x}", rep.value));
                    }
                }
                worst = worst.max(r.unwrap_or(1.0));
                rows.push(RatioRow { config: format!("L={} j={} s={}", a.hierarchy.levels, a.hierarchy.j, a.hierarchy.samples), seed, n, query: query_text(&q), reported: to_f64(rep.value), exact: exact.map(to_f64), ratio: r });
            }
            let qt = t2.elapsed();
            let mut run = json!({
                "n": n,
                "seed": seed,
                "edges": g.edge_count(),
                "recourse": recourse,
                "rebuilds": h.rebuilds(),
                "worst_min_cut_ratio": worst,
            });
            if a.common.timings {
                run["build_ms"] = json!(ms(build));
                run["update_ms_mean"] = json!(ms(upd) / a.updates.max(1) as f64);
                run["query_ms_mean"] = json!(ms(qt) / a.queries.max(1) as f64);
            }
            runs.push(run);
        }
    }
    report.summary = json!({ "runs": runs });
    if let Some(p) = &a.csv {
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).map_err(|e| CliError::Usage(e.to_string()))?;
        emit(Some(p.clone()), &String::from_utf8(buf).expect("csv is utf-8"))?;
    }
    Ok(report)
}
