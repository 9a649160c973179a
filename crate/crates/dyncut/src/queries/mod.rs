//! Cut queries answered on the chains of a hierarchy: minimum s-t cut,
//! sparsest cut, multiway cut and multicut.
//!
//! Every query reports the best value found on a chain graph together with a
//! witness on the input vertices and the witness's exact value in the input
//! graph.

pub mod flow;
pub mod forest_cut;

use std::collections::HashMap;

use num_traits::Zero;
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub use flow::{min_st_cut, FlowNetwork};
pub use forest_cut::ForestCutTracker;

use crate::graph::{Capacity, DynamicMultiGraph, VertexId};
use crate::hierarchy::{ChainGraph, Hierarchy, HierarchyError};
use crate::jtree::{mwu_build, MwuConfig, Snapshot};
use crate::lsst::RootedForest;

#[derive(Debug, Error)]
pub enum QueryError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(VertexId),
    #[error("query needs distinct vertices")]
    NotDistinct,
    #[error("query needs at least {0} terminals")]
    TooFewTerminals(usize),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QueryKind {
    MinCut,
    SparsestCut,
    MultiwayCut,
    Multicut,
}

#[derive(Clone, Debug)]
pub struct QueryReport {
    pub kind: QueryKind,
    /// Best value over chain graphs.
    pub value: Capacity,
    /// Best value found on each chain.
    pub per_chain: Vec<Option<Capacity>>,
    /// Leaf index of the chain that produced `value`.
    pub chain: usize,
    /// Part label of every input vertex; cuts use labels 0 and 1.
    pub witness: Vec<usize>,
    /// Value of the witness in the input graph: cut capacity, sparsity or
    /// partition cost.
    pub witness_value: Capacity,
}

fn check_vertex(g: &DynamicMultiGraph, v: VertexId) -> Result<(), QueryError> {
    if g.has_vertex(v) {
        Ok(())
    } else {
        Err(QueryError::UnknownVertex(v))
    }
}

/// Capacity of the edges whose endpoints carry different labels.
pub fn partition_cost(g: &DynamicMultiGraph, labels: &[usize]) -> Capacity {
    g.edges().filter(|(_, r)| labels[r.u.index()] != labels[r.v.index()]).fold(Capacity::zero(), |a, (_, r)| a + r.cap)
}

/// Cut capacity over the smaller side's vertex count; `None` for trivial sides.
pub fn sparsity(g: &DynamicMultiGraph, side: &[bool]) -> Option<Capacity> {
    let inside = g.vertices().filter(|v| side[v.index()]).count();
    let d = inside.min(g.vertex_count() - inside);
    (d > 0).then(|| g.cut_value(|v| side[v.index()]) / Capacity::from_integer(d as i128))
}

fn edge_list(g: &DynamicMultiGraph) -> Vec<(usize, usize, Capacity)> {
    g.edges().map(|(_, r)| (r.u.index(), r.v.index(), r.cap)).collect()
}

/// Leaf-core vertex holding each input vertex.
fn core_owner(chain: &ChainGraph) -> Vec<usize> {
    chain.owners().iter().map(|r| chain.core_vertex[r].index()).collect()
}

fn sample_trees(out: &DynamicMultiGraph, count: usize, max_iterations: usize, rng: &mut ChaCha8Rng) -> (Snapshot, Vec<(RootedForest, Vec<Capacity>)>) {
    let snap = Snapshot::of(out);
    let res = mwu_build(snap.n, &snap.edges, &snap.caps, 1, &MwuConfig { gamma_init: None, max_iterations }, rng);
    let k = res.trees.len();
    let mut idx = sample(rng, k, count.min(k)).into_vec();
    idx.sort();
    let trees = idx
        .into_iter()
        .map(|i| {
            let t = &res.trees[i];
            (RootedForest::new(snap.n, &snap.edges, &t.tree, &[]), t.induced.clone())
        })
        .collect();
    (snap, trees)
}

fn log_count(n: usize) -> usize {
    ((n.max(2) as f64).log2().ceil() as usize).max(1)
}

fn best_of(per_chain: &[Option<Capacity>]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in per_chain.iter().enumerate() {
        if let Some(v) = v {
            if best.is_none_or(|b| *v < per_chain[b].expect("set")) {
                best = Some(i);
            }
        }
    }
    best
}

enum MinSource {
    Forest { level: usize, handle: crate::graph::EdgeHandle },
    Core(Vec<bool>),
}

/// Minimum `s`-`t` cut: per chain, the cheapest forest edge on the way from
/// `s` and `t` towards their roots, level by level, and an exact flow on the
/// leaf core when the two never share a tree.
pub fn min_cut(h: &mut Hierarchy, s: VertexId, t: VertexId) -> Result<QueryReport, QueryError> {
    check_vertex(h.graph(), s)?;
    check_vertex(h.graph(), t)?;
    if s == t {
        return Err(QueryError::NotDistinct);
    }
    let levels = h.level_count();
    let mut per_chain = Vec::new();
    let mut sources = Vec::new();
    for leaf in 0..h.leaf_count() {
        let path = h.chain_path(leaf);
        let (mut a, mut b) = (s.index(), t.index());
        let mut best: Option<(Capacity, MinSource)> = None;
        let consider = |c: Capacity, src: MinSource, best: &mut Option<(Capacity, MinSource)>| {
            if best.as_ref().is_none_or(|b| c < b.0) {
                *best = Some((c, src));
            }
        };
        let mut shared = false;
        for (d, &idx) in path.iter().enumerate() {
            let inst = h.instance_mut(d + 1, idx);
            let (ra, rb) = (inst.owner(a), inst.owner(b));
            if ra == rb {
                let (c, e) = inst.path_min_between(a, b).expect("distinct vertices of one tree");
                consider(c, MinSource::Forest { level: d + 1, handle: e }, &mut best);
                shared = true;
                break;
            }
            for x in [a, b] {
                if let Some((c, e)) = inst.path_min(x) {
                    consider(c, MinSource::Forest { level: d + 1, handle: e }, &mut best);
                }
            }
            a = inst.core_vertex(ra).expect("root").index();
            b = inst.core_vertex(rb).expect("root").index();
        }
        if !shared {
            let out = h.sparsified_core(levels, leaf);
            let (nu, side) = min_st_cut(out.vertex_bound(), &edge_list(out), a, b);
            consider(nu, MinSource::Core(side), &mut best);
        }
        let (c, src) = best.expect("some candidate");
        per_chain.push(Some(c));
        sources.push(src);
    }
    let chain_idx = best_of(&per_chain).expect("at least one chain");
    let chain = h.chain(chain_idx);
    let side: Vec<bool> = match &sources[chain_idx] {
        MinSource::Forest { level, handle } => {
            let i = chain.forest.iter().position(|e| e.level == *level && e.handle == *handle).expect("edge in chain");
            subtree_side(&chain, i)
        }
        MinSource::Core(core_side) => core_owner(&chain).iter().map(|&c| core_side[c]).collect(),
    };
    Ok(QueryReport {
        kind: QueryKind::MinCut,
        value: per_chain[chain_idx].expect("set"),
        per_chain,
        chain: chain_idx,
        witness: side.iter().map(|&b| b as usize).collect(),
        witness_value: h.graph().cut_value(|v| side[v.index()]),
    })
}

/// Vertices below forest edge `i` of a chain.
fn subtree_side(chain: &ChainGraph, i: usize) -> Vec<bool> {
    let parent = chain.parents().expect("valid chain");
    let e = chain.forest[i];
    let child = if parent[e.u].map(|p| p.1) == Some(i) { e.u } else { e.v };
    (0..chain.n)
        .map(|mut x| loop {
            if x == child {
                break true;
            }
            match parent[x] {
                Some((p, _)) => x = p,
                None => break false,
            }
        })
        .collect()
}

/// Sparsest cut with unit vertex weights: per chain, the best subtree cut of
/// the stacked forest and the best tree cut of the leaf core under weights
/// counting the input vertices each core vertex stands for.
pub fn sparsest_cut(h: &Hierarchy) -> Result<QueryReport, QueryError> {
    let g = h.graph();
    if g.vertex_count() < 2 {
        return Err(QueryError::TooFewTerminals(2));
    }
    let levels = h.level_count();
    let mut rng = ChaCha8Rng::seed_from_u64(h.config().seed ^ 0x5350_4152);
    let mut per_chain = Vec::new();
    let mut sides = Vec::new();
    for leaf in 0..h.leaf_count() {
        let chain = h.chain(leaf);
        let weights: Vec<u64> = (0..chain.n).map(|v| g.has_vertex(VertexId(v as u32)) as u64).collect();
        let edges: Vec<_> = chain.forest.iter().map(|e| (e.u, e.v, e.cap)).collect();
        let tracker = ForestCutTracker::new(chain.n, &edges, &chain.roots, &weights);
        let mut best: Option<(Capacity, Vec<bool>)> = None;
        if let Some((c, i)) = tracker.min() {
            let mut side = vec![false; chain.n];
            for v in tracker.side(i) {
                side[v] = true;
            }
            best = Some((c, side));
        }
        let owner = core_owner(&chain);
        let out = h.sparsified_core(levels, leaf);
        let mut w = vec![0u64; out.vertex_bound()];
        for v in g.vertices() {
            w[owner[v.index()]] += 1;
        }
        if let Some((c, core_side)) = core_sparsest(out, &w, h.config().mwu.max_iterations, &mut rng) {
            if best.as_ref().is_none_or(|b| c < b.0) {
                best = Some((c, owner.iter().map(|&o| core_side[o]).collect()));
            }
        }
        per_chain.push(best.as_ref().map(|b| b.0));
        sides.push(best.map(|b| b.1));
    }
    let chain_idx = best_of(&per_chain).expect("some chain has a candidate");
    let side = sides[chain_idx].clone().expect("set");
    Ok(QueryReport {
        kind: QueryKind::SparsestCut,
        value: per_chain[chain_idx].expect("set"),
        per_chain,
        chain: chain_idx,
        witness: side.iter().map(|&b| b as usize).collect(),
        witness_value: sparsity(g, &side).expect("nontrivial side"),
    })
}

/// Best vertex-weighted tree cut of a core; a disconnected core yields a
/// zero-capacity component.
fn core_sparsest(out: &DynamicMultiGraph, w: &[u64], iters: usize, rng: &mut ChaCha8Rng) -> Option<(Capacity, Vec<bool>)> {
    let n = out.vertex_bound();
    let total: u64 = w.iter().sum();
    let comp = components(n, &edge_list(out), &[]);
    let mut comp_w: HashMap<usize, u64> = HashMap::new();
    for v in 0..n {
        *comp_w.entry(comp[v]).or_default() += w[v];
    }
    if let Some((&c, _)) = comp_w.iter().filter(|(_, &cw)| cw > 0 && cw < total).min_by_key(|(&c, _)| c) {
        return Some((Capacity::zero(), (0..n).map(|v| comp[v] == c).collect()));
    }
    if out.edge_count() == 0 {
        return None;
    }
    let (snap, trees) = sample_trees(out, log_count(n), iters, rng);
    let mut best: Option<(Capacity, usize, usize)> = None;
    for (ti, (f, induced)) in trees.iter().enumerate() {
        let mut sub = w.to_vec();
        for &x in f.order.iter().rev() {
            let p = f.parent[x];
            if p != crate::lsst::NONE {
                sub[p] += sub[x];
            }
        }
        for &x in &f.order {
            if f.parent[x] == crate::lsst::NONE {
                continue;
            }
            let d = sub[x].min(total - sub[x]);
            if d == 0 {
                continue;
            }
            let val = induced[f.parent_edge[x]] / Capacity::from_integer(d as i128);
            if best.is_none_or(|b| val < b.0) {
                best = Some((val, ti, x));
            }
        }
    }
    let _ = snap;
    let (val, ti, x) = best?;
    let f = &trees[ti].0;
    let side = (0..n)
        .map(|mut y| loop {
            if y == x {
                break true;
            }
            if f.parent[y] == crate::lsst::NONE {
                break false;
            }
            y = f.parent[y];
        })
        .collect();
    Some((val, side))
}

/// Component labels after removing the edges listed in `skip`.
fn components(n: usize, edges: &[(usize, usize, Capacity)], skip: &[bool]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        if skip.get(i).copied().unwrap_or(false) {
            continue;
        }
        adj[e.0].push(e.1);
        adj[e.1].push(e.0);
    }
    let mut label = vec![usize::MAX; n];
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = s;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if label[y] == usize::MAX {
                    label[y] = s;
                    stack.push(y);
                }
            }
        }
    }
    label
}

/// Relabels parts so terminal `i` sits in part `i` and every other part
/// joins the part of terminal 0.
fn terminal_labels(labels: &[usize], terminals: &[usize]) -> Vec<usize> {
    let mut map = HashMap::new();
    for (i, &t) in terminals.iter().enumerate() {
        map.entry(labels[t]).or_insert(i);
    }
    labels.iter().map(|l| map.get(l).copied().unwrap_or(0)).collect()
}

/// Multiway cut: terminals are promoted into every core of a scratch copy
/// of the hierarchy; on each leaf core, random terminal bipartitions are
/// solved by exact flow until every pair is split, and the union of their
/// cuts separates all terminals.
pub fn multiway_cut(h: &Hierarchy, terminals: &[VertexId]) -> Result<QueryReport, QueryError> {
    if terminals.len() < 2 {
        return Err(QueryError::TooFewTerminals(2));
    }
    let mut ts = terminals.to_vec();
    ts.sort();
    ts.dedup();
    if ts.len() != terminals.len() {
        return Err(QueryError::NotDistinct);
    }
    for &t in terminals {
        check_vertex(h.graph(), t)?;
    }
    let mut scratch = h.clone();
    scratch.promote(terminals)?;
    let levels = scratch.level_count();
    let mut rng = ChaCha8Rng::seed_from_u64(h.config().seed ^ 0x4d57_4332);
    let k = terminals.len();
    let rounds = 2 * log_count(k) + 1;
    let mut per_chain = Vec::new();
    let mut parts = Vec::new();
    for leaf in 0..scratch.leaf_count() {
        let chain = scratch.chain(leaf);
        let out = scratch.sparsified_core(levels, leaf);
        let edges = edge_list(out);
        let tc: Vec<usize> = terminals.iter().map(|t| chain.core_vertex[&t.index()].index()).collect();
        let huge = edges.iter().fold(Capacity::from_integer(1), |a, e| a + e.2);
        let mut cut = vec![false; edges.len()];
        let mut split = vec![vec![false; k]; k];
        let mut done = 0;
        while done < rounds || split.iter().enumerate().any(|(i, r)| r.iter().enumerate().any(|(j, &s)| i != j && !s)) {
            done += 1;
            let side: Vec<bool> = (0..k).map(|_| rng.gen()).collect();
            if side.iter().all(|&b| b) || side.iter().all(|&b| !b) {
                continue;
            }
            for i in 0..k {
                for j in 0..k {
                    split[i][j] |= side[i] != side[j];
                }
            }
            let mut net = FlowNetwork::from_edges(out.vertex_bound(), &edges);
            let (src, snk) = (net.add_vertex(), net.add_vertex());
            for (i, &t) in tc.iter().enumerate() {
                net.add_undirected(if side[i] { src } else { snk }, t, huge);
            }
            let (_, reach) = net.max_flow(src, snk);
            for (i, e) in edges.iter().enumerate() {
                cut[i] |= reach[e.0] != reach[e.1];
            }
        }
        let labels = terminal_labels(&components(out.vertex_bound(), &edges, &cut), &tc);
        let value = edges.iter().filter(|e| labels[e.0] != labels[e.1]).fold(Capacity::zero(), |a, e| a + e.2);
        let owner = core_owner(&chain);
        per_chain.push(Some(value));
        parts.push((0..chain.n).map(|v| labels[owner[v]]).collect::<Vec<usize>>());
    }
    let chain_idx = best_of(&per_chain).expect("chains exist");
    let witness = parts[chain_idx].clone();
    Ok(QueryReport {
        kind: QueryKind::MultiwayCut,
        value: per_chain[chain_idx].expect("set"),
        per_chain,
        chain: chain_idx,
        witness_value: partition_cost(h.graph(), &witness),
        witness,
    })
}

/// Multicut: pair endpoints are promoted into every core of a scratch copy;
/// on each leaf core a few sampled trees turn the problem into weighted set
/// cover over tree edges, solved greedily.
pub fn multicut(h: &Hierarchy, pairs: &[(VertexId, VertexId)]) -> Result<QueryReport, QueryError> {
    if pairs.is_empty() {
        return Err(QueryError::TooFewTerminals(1));
    }
    let mut ends = Vec::new();
    for &(s, t) in pairs {
        check_vertex(h.graph(), s)?;
        check_vertex(h.graph(), t)?;
        if s == t {
            return Err(QueryError::NotDistinct);
        }
        ends.push(s);
        ends.push(t);
    }
    ends.sort();
    ends.dedup();
    let mut scratch = h.clone();
    scratch.promote(&ends)?;
    let levels = scratch.level_count();
    let mut rng = ChaCha8Rng::seed_from_u64(h.config().seed ^ 0x4d43_5554);
    let mut per_chain = Vec::new();
    let mut parts = Vec::new();
    for leaf in 0..scratch.leaf_count() {
        let chain = scratch.chain(leaf);
        let out = scratch.sparsified_core(levels, leaf);
        let edges = edge_list(out);
        let n = out.vertex_bound();
        let cp: Vec<(usize, usize)> = pairs.iter().map(|(s, t)| (chain.core_vertex[&s.index()].index(), chain.core_vertex[&t.index()].index())).collect();
        let mut best: Option<(Capacity, Vec<usize>)> = None;
        let trees = if edges.is_empty() { Vec::new() } else { sample_trees(out, log_count(chain.n), scratch.config().mwu.max_iterations, &mut rng).1 };
        let forests: Vec<(RootedForest, Vec<Capacity>)> = if trees.is_empty() {
            vec![(RootedForest::new(n, &[], &[], &[]), Vec::new())]
        } else {
            trees
        };
        let snap = Snapshot::of(out);
        for (f, induced) in &forests {
            let chosen = greedy_cover(f, induced, &cp);
            let mut skip = vec![false; snap.edges.len()];
            let tree_edges: Vec<usize> = (0..n).filter(|&x| f.parent[x] != crate::lsst::NONE).map(|x| f.parent_edge[x]).collect();
            for &e in &chosen {
                skip[e] = true;
            }
            let tree_list: Vec<(usize, usize, Capacity)> = snap.edges.iter().zip(&snap.caps).map(|(e, c)| (e.0, e.1, *c)).collect();
            let mut keep = vec![true; tree_list.len()];
            for &e in &tree_edges {
                keep[e] = false;
            }
            let skip_all: Vec<bool> = (0..tree_list.len()).map(|i| keep[i] || skip[i]).collect();
            let labels = components(n, &tree_list, &skip_all);
            let value = edges.iter().filter(|e| labels[e.0] != labels[e.1]).fold(Capacity::zero(), |a, e| a + e.2);
            if best.as_ref().is_none_or(|b| value < b.0) {
                best = Some((value, labels));
            }
        }
        let (value, labels) = best.expect("one forest at least");
        let owner = core_owner(&chain);
        per_chain.push(Some(value));
        parts.push((0..chain.n).map(|v| labels[owner[v]]).collect::<Vec<usize>>());
    }
    let chain_idx = best_of(&per_chain).expect("chains exist");
    let witness = parts[chain_idx].clone();
    Ok(QueryReport {
        kind: QueryKind::Multicut,
        value: per_chain[chain_idx].expect("set"),
        per_chain,
        chain: chain_idx,
        witness_value: partition_cost(h.graph(), &witness),
        witness,
    })
}

/// Greedy weighted set cover: tree edges are sets, pairs are elements an
/// edge covers when it lies on the pair's tree path.
fn greedy_cover(f: &RootedForest, weight: &[Capacity], pairs: &[(usize, usize)]) -> Vec<usize> {
    let paths: Vec<Vec<usize>> = pairs.iter().filter(|(a, b)| f.lca(*a, *b).is_some()).map(|&(a, b)| f.path_edges(a, b)).collect();
    let mut covered = vec![false; paths.len()];
    let mut chosen = Vec::new();
    while covered.iter().any(|c| !c) {
        let mut gain: HashMap<usize, i128> = HashMap::new();
        for (i, p) in paths.iter().enumerate() {
            if !covered[i] {
                for &e in p {
                    *gain.entry(e).or_default() += 1;
                }
            }
        }
        let mut cand: Vec<(usize, i128)> = gain.into_iter().collect();
        cand.sort();
        let &(e, _) = cand
            .iter()
            .min_by(|x, y| (weight[x.0] / Capacity::from_integer(x.1)).cmp(&(weight[y.0] / Capacity::from_integer(y.1))).then(x.0.cmp(&y.0)))
            .expect("uncovered pair has a path edge");
        chosen.push(e);
        for (i, p) in paths.iter().enumerate() {
            if p.contains(&e) {
                covered[i] = true;
            }
        }
    }
    chosen
}

/// Random multiway instance terminals, for examples and benchmarks.
pub fn random_terminals(g: &DynamicMultiGraph, k: usize, rng: &mut impl Rng) -> Vec<VertexId> {
    let vs: Vec<VertexId> = g.vertices().collect();
    let mut t: Vec<VertexId> = vs.choose_multiple(rng, k.min(vs.len())).copied().collect();
    t.sort();
    t
}
