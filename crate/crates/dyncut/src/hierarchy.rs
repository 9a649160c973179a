//! Nested j-tree levels over sparsified cores.
//!
//! Level 0 sparsifies the input graph. Every node below holds one j-tree over
//! its parent's sparsified core together with a sparsifier of its own core;
//! that sparsified core is in turn the base graph of the node's children. A
//! root-to-leaf chain stacks the forests of its nodes on top of the leaf's
//! sparsified core and yields a j-tree on the input vertices.

use std::collections::HashMap;

use num_traits::Zero;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{AppliedUpdate, Capacity, DynamicMultiGraph, EdgeHandle, GraphError, GraphUpdate, VertexId};
use crate::jtree::{JTreeCollection, JTreeInstance, MwuConfig};
use crate::sparsifier::{CutSparsifier, SparseChange, SparseKey, SparsifierConfig, SparsifierError};

#[derive(Debug, Error)]
pub enum HierarchyError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Sparsifier(#[from] SparsifierError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchyConfig {
    pub levels: usize,
    /// Target core size at the last level.
    pub j: usize,
    /// Children sampled per node.
    pub samples: usize,
    /// A level is rebuilt once a core exceeds this multiple of its size.
    pub rebuild_c: f64,
    pub seed: u64,
    /// Accuracy of every sparsifier in the hierarchy.
    pub epsilon: f64,
    pub c_xi: f64,
    pub cap_scale: i128,
    #[serde(skip)]
    pub mwu: MwuConfig,
}

impl Default for HierarchyConfig {
    fn default() -> Self {
        HierarchyConfig {
            levels: 1,
            j: 8,
            samples: 3,
            rebuild_c: 2.0,
            seed: 0,
            epsilon: 0.5,
            c_xi: 1.0,
            cap_scale: 1,
            mwu: MwuConfig::default(),
        }
    }
}

impl HierarchyConfig {
    pub fn validate(&self) -> Result<(), HierarchyError> {
        if self.levels == 0 {
            return Err(HierarchyError::Config("levels must be at least 1".into()));
        }
        if self.j == 0 || self.samples == 0 {
            return Err(HierarchyError::Config("j and samples must be positive".into()));
        }
        if !(self.rebuild_c >= 1.0) {
            return Err(HierarchyError::Config("rebuild constant must be at least 1".into()));
        }
        Ok(())
    }

    /// Smallest power of two not below `1/(1-ε)`; sparsified cores are
    /// scaled by it so they dominate the cores they replace.
    pub fn core_scale(&self) -> Capacity {
        let target = 1.0 / (1.0 - self.epsilon);
        let mut s = 1i128;
        while (s as f64) < target {
            s *= 2;
        }
        Capacity::from_integer(s)
    }

    fn sparsifier(&self, seed: u64) -> SparsifierConfig {
        SparsifierConfig { epsilon: self.epsilon, c_xi: self.c_xi, cap_scale: self.cap_scale, seed, ..Default::default() }
    }
}

/// Core size per level: `⌈n·(j/n)^{i/L}⌉` with exact end points.
pub fn level_sizes(n: usize, j: usize, levels: usize) -> Vec<usize> {
    let n = n.max(1);
    let j = j.min(n).max(1);
    (0..=levels)
        .map(|i| {
            if i == 0 {
                n
            } else if i == levels {
                j
            } else {
                let x = n as f64 * (j as f64 / n as f64).powf(i as f64 / levels as f64);
                // Guard against 22.999999 style round-off.
                (x - 1e-9).ceil() as usize
            }
        })
        .collect()
}

#[derive(Clone, Debug)]
enum OutEvent {
    Vertex(VertexId),
    Sparse(SparseChange),
}

#[derive(Clone, Debug)]
struct Node {
    parent: usize,
    instance: Option<JTreeInstance>,
    sparsifier: CutSparsifier,
    /// Scaled sparsified core; the base graph of the children.
    out: DynamicMultiGraph,
    out_handle: HashMap<SparseKey, EdgeHandle>,
    pending: Vec<OutEvent>,
    children: Vec<usize>,
    updates_since_init: u64,
}

impl Node {
    fn new(parent: usize, instance: Option<JTreeInstance>, sparsifier: CutSparsifier, scale: Capacity) -> Self {
        let mut out = DynamicMultiGraph::new();
        for v in sparsifier.graph().vertices() {
            out.add_vertex_with_id(v).expect("fresh id");
        }
        let mut out_handle = HashMap::new();
        for (key, u, v, c) in sparsifier.edges() {
            let h = out.insert_edge(u, v, c * scale).expect("valid sparsifier edge");
            out_handle.insert(key, h);
        }
        Node { parent, instance, sparsifier, out, out_handle, pending: Vec::new(), children: Vec::new(), updates_since_init: 0 }
    }

    fn instance(&self) -> &JTreeInstance {
        self.instance.as_ref().expect("only level 0 lacks an instance")
    }
}

/// Effects of one update, per level.
#[derive(Clone, Debug, Default, Serialize)]
pub struct HierarchyReport {
    /// Edge changes published into the sparsified cores of each level.
    pub recourse: Vec<u64>,
    /// New roots per level.
    pub terminals: Vec<u64>,
    /// Largest core per level after the update.
    pub core_sizes: Vec<usize>,
    /// Level whose node sets were recomputed.
    pub rebuilt: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainForestEdge {
    pub u: usize,
    pub v: usize,
    pub cap: Capacity,
    pub level: usize,
    /// Handle in the base graph of that level.
    pub handle: EdgeHandle,
}

/// A stacked forest on the input vertices plus a core on its roots.
#[derive(Clone, Debug)]
pub struct ChainGraph {
    pub n: usize,
    pub forest: Vec<ChainForestEdge>,
    /// Core edges between roots.
    pub core: Vec<(usize, usize, Capacity)>,
    /// Roots in ascending order.
    pub roots: Vec<usize>,
    /// Vertex of the leaf's sparsified core for each root.
    pub core_vertex: HashMap<usize, VertexId>,
    /// Index of the chain's leaf at the last level.
    pub leaf: usize,
}

impl ChainGraph {
    pub fn edges(&self) -> Vec<(usize, usize, Capacity)> {
        self.forest.iter().map(|e| (e.u, e.v, e.cap)).chain(self.core.iter().copied()).collect()
    }

    pub fn cut_value(&self, side: &[bool]) -> Capacity {
        self.edges().iter().filter(|e| side[e.0] != side[e.1]).fold(Capacity::zero(), |a, e| a + e.2)
    }

    /// Parent pointers `(parent, forest edge index)` hanging every tree
    /// from its root; `None` if some tree has no root or two.
    pub fn parents(&self) -> Option<Vec<Option<(usize, usize)>>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, e) in self.forest.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        let mut parent = vec![None; self.n];
        let mut seen = vec![false; self.n];
        for &r in &self.roots {
            if seen[r] {
                return None;
            }
            seen[r] = true;
            let mut stack = vec![r];
            while let Some(x) = stack.pop() {
                for &(y, i) in &adj[x] {
                    if Some((y, i)) == parent[x] {
                        continue;
                    }
                    if seen[y] {
                        return None;
                    }
                    seen[y] = true;
                    parent[y] = Some((x, i));
                    stack.push(y);
                }
            }
        }
        seen.iter().all(|&s| s).then_some(parent)
    }

    /// Root owning each vertex.
    pub fn owners(&self) -> Vec<usize> {
        let parent = self.parents().expect("valid chain");
        (0..self.n)
            .map(|mut x| {
                while let Some((p, _)) = parent[x] {
                    x = p;
                }
                x
            })
            .collect()
    }

    /// Checks that the forest is acyclic with one root per tree, that core
    /// edges join distinct roots and that the root count is at most `bound`.
    pub fn validate(&self, bound: usize) -> Result<(), String> {
        if self.parents().is_none() {
            return Err("forest is not rooted once per tree".into());
        }
        let is_root = |v: usize| self.roots.binary_search(&v).is_ok();
        for e in &self.core {
            if !is_root(e.0) || !is_root(e.1) || e.0 == e.1 {
                return Err(format!("core edge ({}, {}) not between distinct roots", e.0, e.1));
            }
        }
        if self.roots.len() > bound {
            return Err(format!("{} roots exceed {}", self.roots.len(), bound));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Hierarchy {
    cfg: HierarchyConfig,
    sizes: Vec<usize>,
    levels: Vec<Vec<Node>>,
    rng: ChaCha8Rng,
    scale: Capacity,
    rebuilds: Vec<u64>,
    updates: u64,
}

impl Hierarchy {
    pub fn new(g: &DynamicMultiGraph, cfg: HierarchyConfig) -> Result<Self, HierarchyError> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let sizes = level_sizes(g.vertex_count(), cfg.j, cfg.levels);
        let scale = cfg.core_scale();
        let root = Node::new(0, None, CutSparsifier::new(g, cfg.sparsifier(rng.next_u64()))?, scale);
        let mut h = Hierarchy { rebuilds: vec![0; cfg.levels + 1], cfg, sizes, levels: vec![vec![root]], rng, scale, updates: 0 };
        h.rebuild_from(1)?;
        Ok(h)
    }

    pub fn config(&self) -> &HierarchyConfig {
        &self.cfg
    }

    pub fn graph(&self) -> &DynamicMultiGraph {
        self.levels[0][0].sparsifier.graph()
    }

    pub fn level_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn level_count(&self) -> usize {
        self.cfg.levels
    }

    pub fn node_count(&self, level: usize) -> usize {
        self.levels[level].len()
    }

    pub fn rebuilds(&self) -> &[u64] {
        &self.rebuilds
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    pub fn instance(&self, level: usize, index: usize) -> &JTreeInstance {
        self.levels[level][index].instance()
    }

    pub fn instance_mut(&mut self, level: usize, index: usize) -> &mut JTreeInstance {
        self.levels[level][index].instance.as_mut().expect("only level 0 lacks an instance")
    }

    /// Node indices from level 1 down to `leaf` at the last level.
    pub fn chain_path(&self, leaf: usize) -> Vec<usize> {
        let mut path = vec![leaf];
        for i in (2..=self.cfg.levels).rev() {
            let up = self.levels[i][*path.last().expect("nonempty")].parent;
            path.push(up);
        }
        path.reverse();
        path
    }

    pub fn leaf_count(&self) -> usize {
        self.levels[self.cfg.levels].len()
    }

    /// Base graph of a node: its parent's scaled sparsified core.
    pub fn base(&self, level: usize, index: usize) -> &DynamicMultiGraph {
        &self.levels[level - 1][self.levels[level][index].parent].out
    }

    /// Scaled sparsified core of a node.
    pub fn sparsified_core(&self, level: usize, index: usize) -> &DynamicMultiGraph {
        &self.levels[level][index].out
    }

    pub fn sparsifier(&self, level: usize, index: usize) -> &CutSparsifier {
        &self.levels[level][index].sparsifier
    }

    pub fn parent(&self, level: usize, index: usize) -> usize {
        self.levels[level][index].parent
    }

    pub fn max_core(&self, level: usize) -> usize {
        self.levels[level].iter().map(|n| n.instance().root_count()).max().unwrap_or(0)
    }

    fn rebuild_from(&mut self, level: usize) -> Result<(), HierarchyError> {
        self.levels.truncate(level);
        for i in level..=self.cfg.levels {
            let mut built = Vec::new();
            let parents = &mut self.levels[i - 1];
            for (pi, p) in parents.iter_mut().enumerate() {
                let mut jm = (self.sizes[i] / 4).max(1);
                let coll = loop {
                    let c = JTreeCollection::build_sampled(&p.out, jm, &self.cfg.mwu, Some(self.cfg.samples), &mut self.rng);
                    if c.max_roots() <= self.sizes[i] || jm == 1 {
                        break c;
                    }
                    jm /= 2;
                };
                p.children.clear();
                p.pending.clear();
                for inst in coll.instances {
                    let s = CutSparsifier::new(inst.core(), self.cfg.sparsifier(self.rng.next_u64()))?;
                    p.children.push(built.len());
                    built.push(Node::new(pi, Some(inst), s, self.scale));
                }
            }
            self.levels.push(built);
        }
        Ok(())
    }

    /// Applies an update to the input graph and cascades it down.
    pub fn update(&mut self, update: &GraphUpdate) -> Result<(AppliedUpdate, HierarchyReport), HierarchyError> {
        let (applied, rec) = self.levels[0][0].sparsifier.update(update)?;
        let root = &mut self.levels[0][0];
        root.pending.extend(rec.changes.into_iter().map(OutEvent::Sparse));
        self.updates += 1;
        let report = self.cascade(&[], true)?;
        Ok((applied, report))
    }

    /// Makes every given input vertex a root at every level of every chain.
    /// Used on a clone before answering terminal queries.
    pub fn promote(&mut self, terminals: &[VertexId]) -> Result<HierarchyReport, HierarchyError> {
        self.cascade(terminals, false)
    }

    fn cascade(&mut self, terminals: &[VertexId], rebuild: bool) -> Result<HierarchyReport, HierarchyError> {
        let levels = self.cfg.levels;
        let mut report = HierarchyReport { recourse: vec![0; levels + 1], terminals: vec![0; levels + 1], core_sizes: vec![0; levels + 1], rebuilt: None };
        // Terminal images on each node's base, per level.
        let mut images: Vec<Vec<usize>> = vec![terminals.iter().map(|v| v.index()).collect()];
        for i in 1..=levels {
            let (above, below) = self.levels.split_at_mut(i);
            let parents = &mut above[i - 1];
            let nodes = &mut below[0];
            let mut logs: Vec<Vec<AppliedUpdate>> = vec![Vec::new(); nodes.len()];
            for p in parents.iter_mut() {
                report.recourse[i - 1] += forward(p, nodes, &mut logs, self.scale)?;
            }
            let mut next_images = Vec::with_capacity(nodes.len());
            for (k, node) in nodes.iter_mut().enumerate() {
                let base = &parents[node.parent].out;
                let inst = node.instance.as_mut().expect("instance");
                let before = inst.counters().terminals_added;
                let pimg = if i == 1 { &images[0] } else { &images[node.parent] };
                for &t in pimg {
                    inst.make_terminal(base, t, &mut logs[k]);
                }
                report.terminals[i] += inst.counters().terminals_added - before;
                next_images.push(pimg.iter().map(|&t| inst.core_vertex(t).expect("terminal is a root").index()).collect());
                for e in &logs[k] {
                    let r = node.sparsifier.replay(e)?;
                    if let AppliedUpdate::VertexAdded(c) = e {
                        node.pending.push(OutEvent::Vertex(*c));
                    }
                    node.pending.extend(r.changes.into_iter().map(OutEvent::Sparse));
                }
                if !logs[k].is_empty() {
                    node.updates_since_init += 1;
                }
                report.core_sizes[i] = report.core_sizes[i].max(inst.root_count());
            }
            images = next_images;
            let limit = self.cfg.rebuild_c * self.sizes[i] as f64;
            if rebuild && nodes.iter().any(|n| n.instance().root_count() as f64 > limit) {
                self.rebuilds[i] += 1;
                self.rebuild_from(i)?;
                report.rebuilt = Some(i);
                for l in i..=levels {
                    report.core_sizes[l] = self.max_core(l);
                }
                return Ok(report);
            }
        }
        for leaf in self.levels[levels].iter_mut() {
            report.recourse[levels] += forward(leaf, &mut [], &mut [], self.scale)?;
        }
        Ok(report)
    }

    /// Chain through a leaf as a j-tree on the input vertices.
    pub fn chain(&self, leaf: usize) -> ChainGraph {
        let levels = self.cfg.levels;
        let path = self.chain_path(leaf);
        let n = self.graph().vertex_bound();
        // Maps a base vertex at the current level to an input vertex.
        let mut map: Vec<usize> = (0..n).collect();
        let mut forest = Vec::new();
        for (d, &idx) in path.iter().enumerate() {
            let inst = self.levels[d + 1][idx].instance();
            for h in inst.forest_edges() {
                let (a, b) = inst.forest_endpoints(h).expect("forest edge");
                forest.push(ChainForestEdge { u: map[a], v: map[b], cap: inst.forest_capacity(h), level: d + 1, handle: h });
            }
            map = (0..inst.core().vertex_bound()).map(|c| map[inst.root_of_core(VertexId(c as u32))]).collect();
        }
        let out = &self.levels[levels][leaf].out;
        let core: Vec<(usize, usize, Capacity)> = out.edges().map(|(_, r)| (map[r.u.index()], map[r.v.index()], r.cap)).collect();
        let mut roots: Vec<usize> = map.clone();
        roots.sort();
        let core_vertex = map.iter().enumerate().map(|(c, &v)| (v, VertexId(c as u32))).collect();
        ChainGraph { n, forest, core, roots, core_vertex, leaf }
    }

    pub fn chains(&self) -> Vec<ChainGraph> {
        (0..self.levels[self.cfg.levels].len()).map(|l| self.chain(l)).collect()
    }

    /// Checks every node: the sparsifier mirrors the core, the sparsified
    /// core uses only core edges, and the core respects its size limit.
    pub fn validate(&self) -> Result<(), String> {
        for i in 1..=self.cfg.levels {
            let limit = self.cfg.rebuild_c * self.sizes[i] as f64;
            for (k, node) in self.levels[i].iter().enumerate() {
                let inst = node.instance();
                let core = inst.core();
                let mirror = node.sparsifier.graph();
                let a: Vec<_> = core.edges().map(|(h, r)| (h, r.u, r.v, r.cap)).collect();
                let b: Vec<_> = mirror.edges().map(|(h, r)| (h, r.u, r.v, r.cap)).collect();
                if a != b {
                    return Err(format!("level {i} node {k}: sparsifier does not mirror the core"));
                }
                for key in node.out_handle.keys() {
                    if !core.has_edge(key.edge) {
                        return Err(format!("level {i} node {k}: sparsified core edge {:?} not in core", key.edge));
                    }
                }
                if inst.root_count() as f64 > limit {
                    return Err(format!("level {i} node {k}: core of {} exceeds {}", inst.root_count(), limit));
                }
            }
        }
        Ok(())
    }
}

/// Publishes a node's pending sparsified-core changes into its output graph
/// and the instances of its children. Returns the number of edge changes.
fn forward(p: &mut Node, children: &mut [Node], logs: &mut [Vec<AppliedUpdate>], scale: Capacity) -> Result<u64, HierarchyError> {
    let mut count = 0;
    let kids = p.children.clone();
    let pending = std::mem::take(&mut p.pending);
    let out = &mut p.out;
    let handles = &mut p.out_handle;
    let add_vertex = |out: &mut DynamicMultiGraph, children: &mut [Node], logs: &mut [Vec<AppliedUpdate>], v: VertexId| {
        if !out.has_vertex(v) {
            out.add_vertex_with_id(v).expect("fresh id");
            for &c in &kids {
                children[c].instance.as_mut().expect("instance").add_vertex(v.index(), &mut logs[c]);
            }
        }
    };
    let remove = |out: &mut DynamicMultiGraph, children: &mut [Node], logs: &mut [Vec<AppliedUpdate>], h: EdgeHandle| -> Result<(), HierarchyError> {
        for &c in &p.children {
            children[c].instance.as_mut().expect("instance").delete_edge(out, h, &mut logs[c])?;
        }
        out.delete_edge(h)?;
        Ok(())
    };
    let insert = |out: &mut DynamicMultiGraph, children: &mut [Node], logs: &mut [Vec<AppliedUpdate>], u: VertexId, v: VertexId, c: Capacity| -> Result<EdgeHandle, HierarchyError> {
        let h = out.insert_edge(u, v, c)?;
        for &k in &p.children {
            children[k].instance.as_mut().expect("instance").insert_edge(out, h, &mut logs[k])?;
        }
        Ok(h)
    };
    for ev in pending {
        match ev {
            OutEvent::Vertex(v) => add_vertex(out, children, logs, v),
            OutEvent::Sparse(SparseChange::Split { vertex, new_vertex, moved }) => {
                add_vertex(out, children, logs, new_vertex);
                for key in moved {
                    let h = handles[&key];
                    let rec = out.edge(h).expect("published edge").clone();
                    let other = rec.other(vertex);
                    remove(out, children, logs, h)?;
                    let nh = insert(out, children, logs, new_vertex, other, rec.cap)?;
                    handles.insert(key, nh);
                    count += 1;
                }
            }
            OutEvent::Sparse(SparseChange::Deleted { key, .. }) => {
                let h = handles.remove(&key).expect("published edge");
                remove(out, children, logs, h)?;
                count += 1;
            }
            OutEvent::Sparse(SparseChange::Recapacitated { key, new, .. }) => {
                let h = handles[&key];
                let (u, v) = out.endpoints(h).expect("published edge");
                remove(out, children, logs, h)?;
                let nh = insert(out, children, logs, u, v, new * scale)?;
                handles.insert(key, nh);
                count += 1;
            }
            OutEvent::Sparse(SparseChange::Inserted { key, u, v, cap }) => {
                let nh = insert(out, children, logs, u, v, cap * scale)?;
                handles.insert(key, nh);
                count += 1;
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{all_cuts, OracleGraph};
    use crate::workload::{connected_erdos_renyi, random_update, UpdateMix};

    #[test]
    fn level_sizes_follow_the_geometric_schedule() {
        assert_eq!(level_sizes(64, 8, 2), vec![64, 23, 8]);
        assert_eq!(level_sizes(64, 8, 1), vec![64, 8]);
        assert_eq!(level_sizes(64, 8, 3), vec![64, 32, 16, 8]);
    }

    #[test]
    fn single_level_has_one_chain_per_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = connected_erdos_renyi(20, 0.3, 2, &mut rng);
        let h = Hierarchy::new(&g, HierarchyConfig { j: 4, ..Default::default() }).unwrap();
        let chains = h.chains();
        assert_eq!(chains.len(), 3);
        for c in &chains {
            c.validate(8).unwrap();
        }
        h.validate().unwrap();
    }

    #[test]
    fn chains_dominate_every_cut_through_updates() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = connected_erdos_renyi(9, 0.5, 3, &mut rng);
        let cfg = HierarchyConfig { levels: 2, j: 2, samples: 2, ..Default::default() };
        let mut h = Hierarchy::new(&g, cfg).unwrap();
        assert_eq!(h.chains().len(), 4);
        let mix = UpdateMix { max_cap: 3, max_vertices: 12, ..Default::default() };
        for _ in 0..20 {
            let u = random_update(h.graph(), &mix, &mut rng);
            h.update(&u).unwrap();
            h.validate().unwrap();
            let n = h.graph().vertex_bound();
            let (_, ge) = h.graph().to_edge_list();
            let og = OracleGraph::new(n, &ge);
            for c in h.chains() {
                c.validate(usize::MAX).unwrap();
                let oc = OracleGraph::new(n, &c.edges());
                for mask in all_cuts(n) {
                    assert!(og.cut_value_mask(mask) <= oc.cut_value_mask(mask));
                }
            }
        }
    }

    #[test]
    fn promote_turns_terminals_into_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = connected_erdos_renyi(16, 0.3, 2, &mut rng);
        let mut h = Hierarchy::new(&g, HierarchyConfig { levels: 2, j: 3, samples: 2, ..Default::default() }).unwrap();
        let ts = [VertexId(0), VertexId(5), VertexId(9)];
        h.promote(&ts).unwrap();
        for c in h.chains() {
            for t in ts {
                assert!(c.roots.binary_search(&t.index()).is_ok());
            }
        }
    }
}
