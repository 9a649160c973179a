//! Oracle-backed verification suites behind the `verify` subcommand.
//!
//! A suite replays updates on a graph and compares every maintained object
//! with a brute-force recomputation. Disagreement with an oracle is a
//! mismatch; a broken internal bound or validator is a violation.

use std::collections::HashSet;

use clap::ValueEnum;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bundle::SpanningForestBundle;
use crate::graph::{DynamicMultiGraph, EdgeHandle, GraphUpdate, VertexId};
use crate::hierarchy::{Hierarchy, HierarchyConfig};
use crate::io::StreamUpdate;
use crate::jtree::{JTreeCollection, MwuConfig};
use crate::msf::DynamicMsf;
use crate::oracle::{self, all_cuts, contract, edge_connectivity, kruskal, OracleGraph, ENUM_BUDGET};
use crate::queries;
use crate::sparsifier::{CutSparsifier, SparsifierConfig};
use crate::workload::{random_update, UpdateMix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Msf,
    Bundle,
    Sparsifier,
    Jtrees,
    Hierarchy,
    Queries,
    All,
}

impl Suite {
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Msf, Suite::Bundle, Suite::Sparsifier, Suite::Jtrees, Suite::Hierarchy, Suite::Queries],
            s => vec![s],
        }
    }
}

/// Where a run takes its updates from.
#[derive(Clone, Debug)]
pub enum Updates {
    Stream(Vec<StreamUpdate>),
    Random { count: usize, mix: UpdateMix },
}

#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub bundle_depth: usize,
    pub j: usize,
    pub mwu: MwuConfig,
    pub sparsifier: SparsifierConfig,
    pub hierarchy: HierarchyConfig,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            bundle_depth: 3,
            j: 2,
            mwu: MwuConfig { gamma_init: Some(0.05), max_iterations: 4 },
            sparsifier: SparsifierConfig::default(),
            hierarchy: HierarchyConfig { levels: 2, j: 2, samples: 2, ..Default::default() },
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub updates: usize,
    pub checks: u64,
    pub mismatches: Vec<String>,
    pub violations: Vec<String>,
}

impl SuiteResult {
    fn check(&mut self, ok: bool, oracle: bool, step: usize, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            let msg = format!("update {step}: {}", what());
            if oracle {
                self.mismatches.push(msg);
            } else {
                self.violations.push(msg);
            }
        }
    }
}

struct Feed {
    updates: Updates,
    rng: ChaCha8Rng,
    next: usize,
}

impl Feed {
    fn pull(&mut self, g: &DynamicMultiGraph) -> Result<Option<GraphUpdate>, String> {
        let i = self.next;
        self.next += 1;
        match &self.updates {
            Updates::Stream(v) => v.get(i).map(|u| u.resolve(g).map_err(|e| format!("stream update {}: {e}", i + 1))).transpose(),
            Updates::Random { count, mix } => Ok((i < *count).then(|| random_update(g, mix, &mut self.rng))),
        }
    }
}

fn dense(g: &DynamicMultiGraph) -> Vec<(usize, usize, crate::graph::Capacity)> {
    g.edges().map(|(_, r)| (r.u.index(), r.v.index(), r.cap)).collect()
}

fn kruskal_forest(g: &DynamicMultiGraph) -> Vec<EdgeHandle> {
    let handles: Vec<EdgeHandle> = g.edges().map(|(h, _)| h).collect();
    let list: Vec<(usize, usize, u32)> = g.edges().map(|(h, r)| (r.u.index(), r.v.index(), h.0)).collect();
    let mut f: Vec<EdgeHandle> = kruskal(g.vertex_bound(), &list).into_iter().map(|i| handles[i]).collect();
    f.sort();
    f
}

fn peeled(g: &DynamicMultiGraph, depth: usize) -> Vec<Vec<EdgeHandle>> {
    let mut left: Vec<(EdgeHandle, usize, usize)> = g.edges().map(|(h, r)| (h, r.u.index(), r.v.index())).collect();
    let mut out = Vec::new();
    for _ in 0..depth {
        if left.is_empty() {
            break;
        }
        let list: Vec<(usize, usize, u32)> = left.iter().map(|&(h, u, v)| (u, v, h.0)).collect();
        let pick: HashSet<usize> = kruskal(g.vertex_bound(), &list).into_iter().collect();
        let mut f: Vec<EdgeHandle> = pick.iter().map(|&i| left[i].0).collect();
        f.sort();
        out.push(f);
        left = left.into_iter().enumerate().filter(|(i, _)| !pick.contains(i)).map(|(_, e)| e).collect();
    }
    out
}

fn dominated(g: &DynamicMultiGraph, h_edges: &[(usize, usize, crate::graph::Capacity)]) -> bool {
    let n = g.vertex_bound();
    let og = OracleGraph::new(n, &dense(g));
    let oh = OracleGraph::new(n, h_edges);
    all_cuts(n).all(|m| og.cut_value_mask(m) <= oh.cut_value_mask(m))
}

pub fn run_suite(suite: Suite, g0: &DynamicMultiGraph, updates: &Updates, params: &VerifyParams, seed: u64) -> Result<SuiteResult, String> {
    let mut feed = Feed { updates: updates.clone(), rng: ChaCha8Rng::seed_from_u64(seed), next: 0 };
    let mut res = SuiteResult { suite: format!("{suite:?}").to_lowercase(), ..Default::default() };
    let mut g = g0.clone();
    match suite {
        Suite::All => unreachable!("expanded by the caller"),
        Suite::Msf => {
            let mut msf = DynamicMsf::new(&g);
            res.check(msf.forest() == kruskal_forest(&g), true, 0, || "initial forest differs from Kruskal".into());
            while let Some(u) = feed.pull(&g)? {
                let applied = g.apply(&u).map_err(|e| e.to_string())?;
                let rec = msf.apply(&g, &applied);
                let step = feed.next;
                res.check(rec.within_bounds(&applied), false, step, || format!("recourse {rec:?} exceeds bounds"));
                res.check(msf.forest() == kruskal_forest(&g), true, step, || "forest differs from Kruskal".into());
            }
        }
        Suite::Bundle => {
            let depth = params.bundle_depth;
            let mut b = SpanningForestBundle::from_graph(&g, depth);
            while let Some(u) = feed.pull(&g)? {
                let applied = g.apply(&u).map_err(|e| e.to_string())?;
                let rec = b.apply(&g, &applied);
                let step = feed.next;
                res.check(rec.within_bounds(&applied, depth), false, step, || format!("bundle recourse {rec:?} exceeds bounds"));
                let mut got = b.forests();
                while got.last().is_some_and(|f| f.is_empty()) {
                    got.pop();
                }
                res.check(got == peeled(&g, depth), true, step, || "layers differ from peeled Kruskal forests".into());
                if g.vertex_bound() <= ENUM_BUDGET {
                    let plain: Vec<(usize, usize)> = g.edges().map(|(_, r)| (r.u.index(), r.v.index())).collect();
                    for h in b.non_bundle_edges() {
                        let (x, y) = g.endpoints(h).expect("live edge");
                        let k = edge_connectivity(g.vertex_bound(), &plain, x.index(), y.index());
                        res.check(k >= depth as u64, true, step, || format!("edge {h:?} outside the bundle has connectivity {k}"));
                    }
                }
            }
        }
        Suite::Sparsifier => {
            let mut sp = CutSparsifier::new(&g, SparsifierConfig { seed, ..params.sparsifier.clone() }).map_err(|e| e.to_string())?;
            while let Some(u) = feed.pull(sp.graph())? {
                let (applied, rec) = sp.update(&u).map_err(|e| e.to_string())?;
                let step = feed.next;
                res.check(rec.within_bounds(&applied, sp.level_count(), sp.bundle_depth()), false, step, || "class recourse exceeds bounds".into());
                res.check(sp.capacity_ratio_ok(), false, step, || "capacity ratio above bound".into());
                res.check(sp.edge_count() <= sp.edge_budget(), false, step, || format!("{} output edges over budget {}", sp.edge_count(), sp.edge_budget()));
                res.check(sp.coin_ledger_consistent(), false, step, || "coin ledger out of sync".into());
                res.check(sp.class_decomposition_exact(), false, step, || "class decomposition wrong".into());
                let gg = sp.graph();
                let subgraph = sp.edges().iter().all(|(k, a, b, _)| gg.edge(k.edge).is_some_and(|r| (r.u, r.v) == (*a, *b) || (r.v, r.u) == (*a, *b)));
                res.check(subgraph, true, step, || "output edge missing from the input".into());
            }
        }
        Suite::Jtrees => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4a54);
            let mut coll = JTreeCollection::build(&g, params.j, &params.mwu, &mut rng);
            while let Some(u) = feed.pull(&g)? {
                coll.apply(&mut g, &u).map_err(|e| e.to_string())?;
                let step = feed.next;
                for (i, inst) in coll.instances.iter().enumerate() {
                    let forest: Vec<usize> = g.edges().enumerate().filter(|(_, (h, _))| inst.in_forest(*h)).map(|(k, _)| k).collect();
                    let mut core: Vec<_> = inst
                        .core()
                        .edges()
                        .map(|(_, r)| {
                            let (a, b) = (inst.root_of_core(r.u), inst.root_of_core(r.v));
                            (a.min(b), a.max(b), r.cap)
                        })
                        .collect();
                    core.sort();
                    let want = contract(g.vertex_bound(), &dense(&g), &forest, &inst.roots());
                    res.check(core == want, true, step, || format!("instance {i}: core differs from the contracted graph"));
                    if g.vertex_bound() <= ENUM_BUDGET {
                        res.check(dominated(&g, &inst.materialize()), true, step, || format!("instance {i}: some cut shrinks"));
                    }
                }
            }
        }
        Suite::Hierarchy => {
            let mut h = Hierarchy::new(&g, HierarchyConfig { seed, ..params.hierarchy.clone() }).map_err(|e| e.to_string())?;
            while let Some(u) = feed.pull(h.graph())? {
                let (_, rep) = h.update(&u).map_err(|e| e.to_string())?;
                let step = feed.next;
                let valid = h.validate();
                res.check(valid.is_ok(), false, step, || valid.clone().unwrap_err());
                for (lvl, &size) in rep.core_sizes.iter().enumerate().skip(1) {
                    let bound = h.config().rebuild_c * h.level_sizes()[lvl] as f64;
                    res.check(size as f64 <= bound, false, step, || format!("level {lvl} core has {size} vertices"));
                }
                if h.graph().vertex_bound() <= ENUM_BUDGET {
                    for (leaf, c) in h.chains().iter().enumerate() {
                        res.check(dominated(h.graph(), &c.edges()), true, step, || format!("chain {leaf}: some cut shrinks"));
                    }
                }
            }
        }
        Suite::Queries => {
            let mut h = Hierarchy::new(&g, HierarchyConfig { seed, ..params.hierarchy.clone() }).map_err(|e| e.to_string())?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5155);
            loop {
                let step = feed.next;
                let gg = h.graph().clone();
                let vs: Vec<VertexId> = gg.vertices().collect();
                if vs.len() >= 2 {
                    let st: Vec<VertexId> = vs.choose_multiple(&mut rng, 2).copied().collect();
                    let rep = queries::min_cut(&mut h, st[0], st[1]).map_err(|e| e.to_string())?;
                    let (exact, _) = oracle::max_flow(&OracleGraph::new(gg.vertex_bound(), &dense(&gg)), st[0].index(), st[1].index());
                    res.check(rep.value >= exact, true, step, || format!("min cut {} below exact {exact}", rep.value));
                    res.check(rep.witness[st[0].index()] != rep.witness[st[1].index()], true, step, || "min cut witness does not separate".into());
                }
                if vs.len() >= 3 {
                    let ts: Vec<VertexId> = vs.choose_multiple(&mut rng, 3).copied().collect();
                    let rep = queries::multiway_cut(&h, &ts).map_err(|e| e.to_string())?;
                    let ok = (0..3).all(|a| (a + 1..3).all(|b| rep.witness[ts[a].index()] != rep.witness[ts[b].index()]));
                    res.check(ok, true, step, || "multiway witness joins two terminals".into());
                }
                if vs.len() >= 4 {
                    let p: Vec<VertexId> = vs.choose_multiple(&mut rng, 4).copied().collect();
                    let pairs = [(p[0], p[1]), (p[2], p[3])];
                    let rep = queries::multicut(&h, &pairs).map_err(|e| e.to_string())?;
                    res.check(pairs.iter().all(|(a, b)| rep.witness[a.index()] != rep.witness[b.index()]), true, step, || "multicut witness joins a pair".into());
                }
                match feed.pull(h.graph())? {
                    Some(u) => {
                        h.update(&u).map_err(|e| e.to_string())?;
                    }
                    None => break,
                }
            }
        }
    }
    res.updates = feed.next.saturating_sub(1);
    Ok(res)
}

/// Runs `suite` once per seed on fresh copies of `g`.
pub fn run_many(suite: Suite, g: &DynamicMultiGraph, updates: &Updates, params: &VerifyParams, seeds: impl IntoIterator<Item = u64>) -> Result<Vec<SuiteResult>, String> {
    let seeds: Vec<u64> = seeds.into_iter().collect();
    let mut out = Vec::new();
    for s in suite.expand() {
        for &seed in &seeds {
            out.push(run_suite(s, g, updates, params, seed)?);
        }
    }
    Ok(out)
}
