//! A single j-tree over a dynamic base graph: a decremental rooted forest cut
//! out of a spanning tree, plus the contracted core on the forest's roots.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::Rng;

use crate::forest::{EulerTourForest, LinkCutForest};
use crate::graph::{AppliedUpdate, Capacity, DynamicMultiGraph, EdgeHandle, GraphError, VertexId, VertexSplit};
use crate::lsst::{RootedForest, NONE};

/// Description of a tree taken from the collection builder, in base handles.
#[derive(Clone, Debug)]
pub struct TreeSeed {
    /// Tree edges with their induced tree capacities.
    pub edges: Vec<(EdgeHandle, Capacity)>,
    /// Tree edges whose endpoints must be roots.
    pub heavy: Vec<EdgeHandle>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct CoreCounters {
    pub splits: u64,
    pub insertions: u64,
    pub deletions: u64,
    pub vertex_additions: u64,
    pub terminals_added: u64,
}

type ForestKey = (Capacity, u32);

#[derive(Clone, Debug)]
pub struct JTreeInstance {
    /// Base vertices covered by the spanning tree at build time.
    tree_vertices: usize,
    tree: RootedForest,
    tree_edge_handles: Vec<EdgeHandle>,
    /// Induced tree capacity per base handle, zero off the tree.
    tree_cap: Vec<Capacity>,
    in_forest: Vec<bool>,
    forest: LinkCutForest<ForestKey>,
    /// Vertex values count crossing-edge endpoints.
    tally: EulerTourForest,
    is_root: Vec<bool>,
    roots_in_tree: BTreeSet<(u32, usize)>,
    core: DynamicMultiGraph,
    core_vertex: Vec<Option<VertexId>>,
    root_of_core: Vec<usize>,
    known: Vec<bool>,
    projected: Vec<Option<EdgeHandle>>,
    core_source: Vec<EdgeHandle>,
    counters: CoreCounters,
}

fn fkey(c: Capacity, h: EdgeHandle) -> ForestKey {
    (c, h.0)
}

impl JTreeInstance {
    /// Builds the forest and core for `seed` over the current `base`. Each
    /// tree component is rooted at a vertex drawn from `rng`.
    pub fn build(base: &DynamicMultiGraph, seed: &TreeSeed, rng: &mut impl Rng) -> Self {
        let n = base.vertex_bound();
        let local: Vec<(usize, usize)> = seed
            .edges
            .iter()
            .map(|(h, _)| {
                let (u, v) = base.endpoints(*h).expect("tree edge in base");
                (u.index(), v.index())
            })
            .collect();
        let all: Vec<usize> = (0..local.len()).collect();
        let plain = RootedForest::new(n, &local, &all, &[]);
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            members[plain.root_of[v]].push(v);
        }
        let picks: Vec<usize> = members.iter().filter(|m| !m.is_empty()).map(|m| m[rng.gen_range(0..m.len())]).collect();
        let tree = RootedForest::new(n, &local, &all, &picks);

        let mut tree_cap = vec![Capacity::zero(); base.edge_bound()];
        for &(h, c) in &seed.edges {
            tree_cap[h.index()] = c;
        }
        let tree_edge_handles: Vec<EdgeHandle> = seed.edges.iter().map(|e| e.0).collect();

        // Root set: heavy endpoints closed under consecutive LCAs, plus one
        // root for every tree component left without one.
        let mut is_root = vec![false; n];
        let mut marked: Vec<usize> = Vec::new();
        for h in &seed.heavy {
            let (u, v) = base.endpoints(*h).expect("heavy edge in base");
            marked.push(u.index());
            marked.push(v.index());
        }
        marked.sort_by_key(|&v| (tree.entry[v], v));
        marked.dedup();
        let mut closure = marked.clone();
        for w in marked.windows(2) {
            if let Some(l) = tree.lca(w[0], w[1]) {
                closure.push(l);
            }
        }
        for &v in &closure {
            is_root[v] = true;
        }
        let mut covered = vec![false; n];
        for v in 0..n {
            if is_root[v] {
                covered[tree.root_of[v]] = true;
            }
        }
        for v in 0..n {
            if tree.root_of[v] == v && !covered[v] {
                is_root[v] = true;
            }
        }

        // Drop the cheapest tree edge between every root and its nearest
        // root ancestor.
        let key_of = |x: usize| fkey(tree_cap[tree_edge_handles[tree.parent_edge[x]].index()], tree_edge_handles[tree.parent_edge[x]]);
        let mut best: Vec<Option<(ForestKey, usize)>> = vec![None; n];
        let mut root_above = vec![false; n];
        let mut removed = vec![false; local.len()];
        for &x in &tree.order {
            let p = tree.parent[x];
            if p == NONE {
                continue;
            }
            let here = (key_of(x), tree.parent_edge[x]);
            best[x] = match best[p] {
                Some(b) if !is_root[p] && b.0 < here.0 => Some(b),
                _ => Some(here),
            };
            root_above[x] = is_root[p] || root_above[p];
            if is_root[x] && root_above[x] {
                removed[best[x].expect("has parent").1] = true;
            }
        }

        let mut forest = LinkCutForest::new(n);
        let mut tally = EulerTourForest::new(n);
        let mut in_forest = vec![false; base.edge_bound()];
        for &x in &tree.order {
            let p = tree.parent[x];
            if p == NONE || removed[tree.parent_edge[x]] {
                continue;
            }
            let h = tree_edge_handles[tree.parent_edge[x]];
            forest.link(x, p, h.0 as u64, key_of(x));
            tally.link(x, p, h.0 as u64);
            in_forest[h.index()] = true;
        }
        let mut roots_in_tree = BTreeSet::new();
        let mut core = DynamicMultiGraph::new();
        let mut core_vertex = vec![None; n];
        let mut root_of_core = Vec::new();
        for v in 0..n {
            if is_root[v] {
                forest.make_root(v);
                roots_in_tree.insert((tree.entry[v], v));
                core_vertex[v] = Some(core.add_vertex());
                root_of_core.push(v);
            }
        }

        let mut inst = JTreeInstance {
            tree_vertices: n,
            tree,
            tree_edge_handles,
            tree_cap,
            in_forest,
            forest,
            tally,
            is_root,
            roots_in_tree,
            core,
            core_vertex,
            root_of_core,
            known: vec![false; base.edge_bound()],
            projected: vec![None; base.edge_bound()],
            core_source: Vec::new(),
            counters: CoreCounters::default(),
        };
        let owner: Vec<usize> = (0..n).map(|v| inst.forest.find_root(v)).collect();
        for (h, rec) in base.edges() {
            inst.known[h.index()] = true;
            let (a, b) = (owner[rec.u.index()], owner[rec.v.index()]);
            if a != b {
                inst.project(h, rec.u.index(), rec.v.index(), a, b, rec.cap);
            }
        }
        inst
    }

    pub fn core(&self) -> &DynamicMultiGraph {
        &self.core
    }

    pub fn counters(&self) -> &CoreCounters {
        &self.counters
    }

    pub fn root_count(&self) -> usize {
        self.core.vertex_count()
    }

    pub fn vertex_bound(&self) -> usize {
        self.is_root.len()
    }

    pub fn is_root(&self, v: usize) -> bool {
        self.is_root.get(v).copied().unwrap_or(false)
    }

    /// Base vertices that are roots, ascending.
    pub fn roots(&self) -> Vec<usize> {
        (0..self.is_root.len()).filter(|&v| self.is_root[v]).collect()
    }

    /// Root of the forest component holding `v`.
    pub fn owner(&mut self, v: usize) -> usize {
        self.forest.find_root(v)
    }

    pub fn core_vertex(&self, root: usize) -> Option<VertexId> {
        self.core_vertex.get(root).copied().flatten()
    }

    pub fn root_of_core(&self, c: VertexId) -> usize {
        self.root_of_core[c.index()]
    }

    /// Base edge a core edge was projected from.
    pub fn core_source(&self, c: EdgeHandle) -> EdgeHandle {
        self.core_source[c.index()]
    }

    pub fn projection(&self, h: EdgeHandle) -> Option<EdgeHandle> {
        self.projected.get(h.index()).copied().flatten()
    }

    /// Tree edges still in the forest, ascending.
    pub fn forest_edges(&self) -> Vec<EdgeHandle> {
        let mut out: Vec<EdgeHandle> = self.tree_edge_handles.iter().copied().filter(|h| self.in_forest[h.index()]).collect();
        out.sort();
        out
    }

    pub fn tree_edges(&self) -> &[EdgeHandle] {
        &self.tree_edge_handles
    }

    pub fn in_forest(&self, h: EdgeHandle) -> bool {
        self.in_forest.get(h.index()).copied().unwrap_or(false)
    }

    /// Induced capacity the tree assigned to `h`; zero off the tree.
    pub fn tree_capacity(&self, h: EdgeHandle) -> Capacity {
        self.tree_cap.get(h.index()).copied().unwrap_or_else(Capacity::zero)
    }

    /// Capacity of a forest edge in the j-tree.
    pub fn forest_capacity(&self, h: EdgeHandle) -> Capacity {
        self.tree_capacity(h) * Capacity::from_integer(2)
    }

    /// Endpoints of a live forest edge.
    pub fn forest_endpoints(&self, h: EdgeHandle) -> Option<(usize, usize)> {
        self.forest.edge_endpoints(h.0 as u64)
    }

    /// Cheapest forest edge between `v` and its root, with its j-tree capacity.
    pub fn path_min(&mut self, v: usize) -> Option<(Capacity, EdgeHandle)> {
        self.forest.path_min(v).map(|((c, _), id)| (c * Capacity::from_integer(2), EdgeHandle(id as u32)))
    }

    /// Cheapest forest edge between two vertices of one tree.
    pub fn path_min_between(&mut self, a: usize, b: usize) -> Option<(Capacity, EdgeHandle)> {
        self.forest.path_min_between(a, b).map(|((c, _), id)| (c * Capacity::from_integer(2), EdgeHandle(id as u32)))
    }

    /// Forest vertices of the component rooted at `root`.
    pub fn component(&self, root: usize) -> Vec<usize> {
        let mut vs = self.tally.component_vertices(root);
        vs.sort();
        vs
    }

    /// The j-tree itself on base vertex ids: forest edges at twice their tree
    /// capacity plus one edge per core edge between the owning roots.
    pub fn materialize(&self) -> Vec<(usize, usize, Capacity)> {
        let mut out = Vec::new();
        for h in self.forest_edges() {
            let (a, b) = self.forest.edge_endpoints(h.0 as u64).expect("forest edge");
            out.push((a, b, self.forest_capacity(h)));
        }
        for (_, rec) in self.core.edges() {
            out.push((self.root_of_core[rec.u.index()], self.root_of_core[rec.v.index()], rec.cap));
        }
        out
    }

    fn tree_of(&self, v: usize) -> Option<usize> {
        (v < self.tree_vertices).then(|| self.tree.root_of[v])
    }

    fn grow(&mut self, base: &DynamicMultiGraph) {
        let m = base.edge_bound();
        if self.known.len() < m {
            self.known.resize(m, false);
            self.projected.resize(m, None);
            self.in_forest.resize(m, false);
            self.tree_cap.resize(m, Capacity::zero());
        }
    }

    /// Registers base vertex `v` (created after the build) as an isolated root.
    pub fn add_vertex(&mut self, v: usize, log: &mut Vec<AppliedUpdate>) {
        if v < self.is_root.len() && self.is_root[v] {
            return;
        }
        let n = v + 1;
        if self.is_root.len() < n {
            self.is_root.resize(n, false);
            self.core_vertex.resize(n, None);
            self.forest.ensure_vertices(n);
            self.tally.ensure_vertices(n);
        }
        self.is_root[v] = true;
        let c = self.core.add_vertex();
        self.core_vertex[v] = Some(c);
        self.root_of_core.push(v);
        self.counters.vertex_additions += 1;
        log.push(AppliedUpdate::VertexAdded(c));
    }

    /// Makes `t` a root together with the branching vertex that keeps the
    /// root set closed under lowest common ancestors.
    pub fn make_terminal(&mut self, base: &DynamicMultiGraph, t: usize, log: &mut Vec<AppliedUpdate>) {
        if self.is_root[t] {
            return;
        }
        let tr = self.tree_of(t).expect("non-roots lie in the tree");
        let e = self.tree.entry[t];
        let pred = self.roots_in_tree.range(..(e, 0)).next_back().map(|x| x.1);
        let succ = self.roots_in_tree.range((e, 0)..).next().map(|x| x.1);
        let mut branch: Option<usize> = None;
        for x in [pred, succ].into_iter().flatten() {
            if self.tree.root_of[x] != tr {
                continue;
            }
            let l = self.tree.lca(t, x).expect("same tree");
            if branch.is_none_or(|b| self.tree.depth[l] > self.tree.depth[b]) {
                branch = Some(l);
            }
        }
        if let Some(b) = branch {
            if b != t {
                self.add_terminal(base, b, log);
            }
        }
        self.add_terminal(base, t, log);
    }

    /// Cuts the cheapest forest edge between `w` and its root and promotes
    /// `w` to a root. The core vertex of the old root is split and edges that
    /// now cross the cut are projected.
    pub fn add_terminal(&mut self, base: &DynamicMultiGraph, w: usize, log: &mut Vec<AppliedUpdate>) {
        if self.is_root[w] {
            return;
        }
        self.grow(base);
        let r = self.forest.find_root(w);
        let (_, id) = self.forest.path_min(w).expect("non-root has a root path");
        self.forest.cut(id);
        self.forest.make_root(w);
        self.tally.cut(id);
        self.in_forest[id as usize] = false;
        self.is_root[w] = true;
        self.roots_in_tree.insert((self.tree.entry[w], w));
        self.counters.terminals_added += 1;

        let w_side = self.tally.component_sum(w) <= self.tally.component_sum(r);
        let (x_root, y_root) = if w_side { (w, r) } else { (r, w) };
        let x_tree = self.tally.tree_id(x_root);
        let y_tree = self.tally.tree_id(y_root);
        let mut moved = Vec::new();
        let mut fresh = Vec::new();
        for x in self.tally.component_vertices(x_root) {
            for &h in base.incident(VertexId(x as u32)) {
                if !self.known[h.index()] {
                    continue;
                }
                let y = base.edge(h).expect("incident edge").other(VertexId(x as u32)).index();
                let ty = self.tally.tree_id(y);
                if ty == x_tree {
                    continue;
                } else if ty == y_tree {
                    // Seen once from the x side only.
                    fresh.push((h, x, y));
                } else {
                    moved.push(self.projected[h.index()].expect("crossing edge is projected"));
                }
            }
        }
        moved.sort();
        moved.dedup();
        fresh.sort();

        let old = self.core_vertex[r].expect("root has a core vertex");
        let nv = VertexId(self.core.vertex_bound() as u32);
        self.core.split_vertex_into(old, nv, &moved).expect("split of a core vertex");
        self.root_of_core.push(x_root);
        self.core_vertex[x_root] = Some(nv);
        self.core_vertex[y_root] = Some(old);
        self.root_of_core[old.index()] = y_root;
        self.counters.splits += 1;
        log.push(AppliedUpdate::Split(VertexSplit { vertex: old, new_vertex: nv, moved, swapped: false }));

        for (h, x, y) in fresh {
            let c = base.capacity(h).expect("live edge");
            self.project(h, x, y, x_root, y_root, c);
            self.counters.insertions += 1;
            let e = self.projected[h.index()].expect("just projected");
            let (cu, cv) = self.core.endpoints(e).expect("core edge");
            log.push(AppliedUpdate::Inserted { edge: e, u: cu, v: cv, cap: c });
        }
    }

    fn project(&mut self, h: EdgeHandle, x: usize, y: usize, rx: usize, ry: usize, c: Capacity) {
        let cx = self.core_vertex[rx].expect("root");
        let cy = self.core_vertex[ry].expect("root");
        let e = self.core.insert_edge(cx, cy, c).expect("core endpoints are distinct roots");
        self.projected[h.index()] = Some(e);
        if self.core_source.len() <= e.index() {
            self.core_source.resize(e.index() + 1, EdgeHandle(u32::MAX));
        }
        self.core_source[e.index()] = h;
        self.tally.add(x, 1);
        self.tally.add(y, 1);
    }

    /// Absorbs base edge `h`, which `base` already holds.
    pub fn insert_edge(&mut self, base: &DynamicMultiGraph, h: EdgeHandle, log: &mut Vec<AppliedUpdate>) -> Result<(), GraphError> {
        let (u, v) = base.endpoints(h).ok_or(GraphError::UnknownEdge(h))?;
        self.grow(base);
        self.make_terminal(base, u.index(), log);
        self.make_terminal(base, v.index(), log);
        self.known[h.index()] = true;
        let c = base.capacity(h).expect("live edge");
        self.project(h, u.index(), v.index(), u.index(), v.index(), c);
        self.counters.insertions += 1;
        let e = self.projected[h.index()].expect("just projected");
        let (cu, cv) = self.core.endpoints(e).expect("core edge");
        log.push(AppliedUpdate::Inserted { edge: e, u: cu, v: cv, cap: c });
        Ok(())
    }

    /// Forgets base edge `h`, which `base` still holds; the caller removes it
    /// from `base` afterwards.
    pub fn delete_edge(&mut self, base: &DynamicMultiGraph, h: EdgeHandle, log: &mut Vec<AppliedUpdate>) -> Result<(), GraphError> {
        let (u, v) = base.endpoints(h).ok_or(GraphError::UnknownEdge(h))?;
        if !self.known.get(h.index()).copied().unwrap_or(false) {
            return Err(GraphError::UnknownEdge(h));
        }
        self.make_terminal(base, u.index(), log);
        self.make_terminal(base, v.index(), log);
        let e = self.projected[h.index()].take().expect("edge between roots is projected");
        let rec = self.core.delete_edge(e).expect("projected edge in core");
        self.tally.add(u.index(), -1);
        self.tally.add(v.index(), -1);
        self.known[h.index()] = false;
        self.counters.deletions += 1;
        log.push(AppliedUpdate::Deleted { edge: e, u: rec.u, v: rec.v, cap: rec.cap });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cap;
    use crate::oracle;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn core_by_definition(inst: &JTreeInstance, base: &DynamicMultiGraph) -> Vec<(usize, usize, Capacity)> {
        let (_, edges) = base.to_edge_list();
        let forest: Vec<usize> = base
            .edges()
            .enumerate()
            .filter(|(_, (h, _))| inst.in_forest(*h))
            .map(|(i, _)| i)
            .collect();
        oracle::contract(base.vertex_bound(), &edges, &forest, &inst.roots())
    }

    fn maintained_core(inst: &JTreeInstance) -> Vec<(usize, usize, Capacity)> {
        let mut out: Vec<_> = inst
            .core()
            .edges()
            .map(|(_, r)| {
                let (a, b) = (inst.root_of_core(r.u), inst.root_of_core(r.v));
                (a.min(b), a.max(b), r.cap)
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn empty_heavy_set_keeps_the_whole_tree() {
        let base = DynamicMultiGraph::from_edges(4, &[(0, 1, cap(1)), (1, 2, cap(1)), (2, 3, cap(1)), (3, 0, cap(1))]).unwrap();
        let seed = TreeSeed {
            edges: vec![(EdgeHandle(0), cap(2)), (EdgeHandle(1), cap(2)), (EdgeHandle(2), cap(2))],
            heavy: vec![],
        };
        let inst = JTreeInstance::build(&base, &seed, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(inst.root_count(), 1);
        assert_eq!(inst.core().edge_count(), 0);
        assert_eq!(inst.forest_edges().len(), 3);
    }

    #[test]
    fn heavy_edge_splits_a_path() {
        // Path a-b-c-d as the tree of a 4-cycle, heavy middle edge.
        let base = DynamicMultiGraph::from_edges(4, &[(0, 1, cap(1)), (1, 2, cap(1)), (2, 3, cap(1)), (3, 0, cap(1))]).unwrap();
        let seed = TreeSeed {
            edges: vec![(EdgeHandle(0), cap(2)), (EdgeHandle(1), cap(2)), (EdgeHandle(2), cap(2))],
            heavy: vec![EdgeHandle(1)],
        };
        let inst = JTreeInstance::build(&base, &seed, &mut ChaCha8Rng::seed_from_u64(5));
        assert!(inst.is_root(1) && inst.is_root(2));
        assert_eq!(inst.root_count(), 2);
        assert!(!inst.in_forest(EdgeHandle(1)));
        assert_eq!(maintained_core(&inst), core_by_definition(&inst, &base));
        let h = inst.materialize();
        let g = oracle::OracleGraph::new(4, &[(0, 1, cap(1)), (1, 2, cap(1)), (2, 3, cap(1)), (3, 0, cap(1))]);
        let hg = oracle::OracleGraph::new(4, &h);
        for mask in oracle::all_cuts(4) {
            assert!(g.cut_value_mask(mask) <= hg.cut_value_mask(mask));
        }
    }

    #[test]
    fn add_terminal_matches_recontraction() {
        // Path 0-1-2 plus chord (0,2); terminal 1 added.
        let mut base = DynamicMultiGraph::from_edges(3, &[(0, 1, cap(1)), (1, 2, cap(3)), (0, 2, cap(1))]).unwrap();
        let seed = TreeSeed { edges: vec![(EdgeHandle(0), cap(2)), (EdgeHandle(1), cap(4))], heavy: vec![] };
        let mut inst = JTreeInstance::build(&base, &seed, &mut ChaCha8Rng::seed_from_u64(2));
        let mut log = Vec::new();
        let roots = inst.roots();
        let t = (0..3).find(|v| !roots.contains(v)).unwrap();
        inst.add_terminal(&base, t, &mut log);
        assert_eq!(inst.root_count(), 2);
        assert_eq!(maintained_core(&inst), core_by_definition(&inst, &base));
        let h = base.insert_edge(VertexId(0), VertexId(1), cap(5)).unwrap();
        inst.insert_edge(&base, h, &mut log).unwrap();
        assert_eq!(maintained_core(&inst), core_by_definition(&inst, &base));
        inst.delete_edge(&base, EdgeHandle(2), &mut log).unwrap();
        base.delete_edge(EdgeHandle(2)).unwrap();
        assert_eq!(maintained_core(&inst), core_by_definition(&inst, &base));
    }
}
