//! Dynamic minimum spanning forest under edge updates and vertex splits.
//!
//! Priorities are the edge handles themselves: an older edge is cheaper. Since
//! a freshly inserted edge always carries the largest handle so far, an
//! insertion never displaces a forest edge, and the forest changes by at most
//! one edge per insertion, deletion or split.
//!
//! [`LayerForest`] is the engine. It does not own a graph: every call receives
//! the physical graph *after* the update, and the layer keeps its own record of
//! which edges it has been told about. [`DynamicMsf`] wraps one layer that
//! tracks every edge of a graph.

use std::cmp::Reverse;

use serde::Serialize;

use crate::forest::{EulerTourForest, LinkCutForest};
use crate::graph::{AppliedUpdate, DynamicMultiGraph, EdgeHandle, VertexId};

const ABSENT: u8 = 0;
const NON_TREE: u8 = 1;
const TREE: u8 = 2;

/// Forest changes caused by one layer operation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LayerChange {
    pub added: Option<EdgeHandle>,
    pub removed: Option<EdgeHandle>,
}

#[derive(Clone, Debug)]
pub struct LayerForest {
    lct: LinkCutForest<Reverse<u32>>,
    ett: EulerTourForest,
    state: Vec<u8>,
    edges: usize,
    tree_edges: usize,
}

impl LayerForest {
    pub fn new(vertex_bound: usize) -> Self {
        LayerForest {
            lct: LinkCutForest::new(vertex_bound),
            ett: EulerTourForest::new(vertex_bound),
            state: Vec::new(),
            edges: 0,
            tree_edges: 0,
        }
    }

    fn grow(&mut self, g: &DynamicMultiGraph) {
        self.lct.ensure_vertices(g.vertex_bound());
        self.ett.ensure_vertices(g.vertex_bound());
        if self.state.len() < g.edge_bound() {
            self.state.resize(g.edge_bound(), ABSENT);
        }
    }

    fn st(&self, h: EdgeHandle) -> u8 {
        self.state.get(h.index()).copied().unwrap_or(ABSENT)
    }

    pub fn contains(&self, h: EdgeHandle) -> bool {
        self.st(h) != ABSENT
    }

    pub fn is_tree(&self, h: EdgeHandle) -> bool {
        self.st(h) == TREE
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn tree_edge_count(&self) -> usize {
        self.tree_edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges == 0
    }

    pub fn connected(&self, a: VertexId, b: VertexId) -> bool {
        a.index() < self.ett.vertex_count() && b.index() < self.ett.vertex_count() && self.ett.connected(a.index(), b.index())
    }

    pub fn tree_edges(&self) -> Vec<EdgeHandle> {
        self.state
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == TREE)
            .map(|(i, _)| EdgeHandle(i as u32))
            .collect()
    }

    fn link(&mut self, h: EdgeHandle, a: VertexId, b: VertexId) {
        let ok = self.lct.link(a.index(), b.index(), h.0 as u64, Reverse(h.0));
        let ok2 = self.ett.link(a.index(), b.index(), h.0 as u64);
        debug_assert!(ok && ok2, "link across one tree");
        self.state[h.index()] = TREE;
        self.tree_edges += 1;
    }

    fn cut(&mut self, h: EdgeHandle) {
        self.lct.cut(h.0 as u64);
        self.ett.cut(h.0 as u64);
        self.tree_edges -= 1;
    }

    fn tally(&mut self, x: VertexId, d: i64) {
        self.ett.add(x.index(), d);
    }

    /// Registers `h` (present in `g`) with the layer.
    pub fn insert(&mut self, g: &DynamicMultiGraph, h: EdgeHandle) -> LayerChange {
        self.grow(g);
        debug_assert_eq!(self.st(h), ABSENT);
        let (u, v) = g.endpoints(h).expect("inserted edge exists");
        self.edges += 1;
        if !self.ett.connected(u.index(), v.index()) {
            self.link(h, u, v);
            return LayerChange { added: Some(h), removed: None };
        }
        let heaviest = self.lct.path_min_between(u.index(), v.index()).map(|(Reverse(id), _)| EdgeHandle(id));
        match heaviest {
            Some(m) if m > h => {
                let (a, b) = g.endpoints(m).expect("forest edge exists");
                self.cut(m);
                self.state[m.index()] = NON_TREE;
                self.tally(a, 1);
                self.tally(b, 1);
                self.link(h, u, v);
                LayerChange { added: Some(h), removed: Some(m) }
            }
            _ => {
                self.state[h.index()] = NON_TREE;
                self.tally(u, 1);
                self.tally(v, 1);
                LayerChange::default()
            }
        }
    }

    /// Unregisters `h`, whose endpoints were `u` and `v`.
    pub fn delete(&mut self, g: &DynamicMultiGraph, h: EdgeHandle, u: VertexId, v: VertexId) -> LayerChange {
        self.grow(g);
        match self.st(h) {
            ABSENT => LayerChange::default(),
            NON_TREE => {
                self.state[h.index()] = ABSENT;
                self.edges -= 1;
                self.tally(u, -1);
                self.tally(v, -1);
                LayerChange::default()
            }
            _ => {
                self.cut(h);
                self.state[h.index()] = ABSENT;
                self.edges -= 1;
                let added = self.reconnect(g, u, v);
                LayerChange { added, removed: Some(h) }
            }
        }
    }

    /// Mirrors a split that `g` has already carried out, then reconnects the
    /// two halves if the layer still connects them.
    pub fn split(&mut self, g: &DynamicMultiGraph, vertex: VertexId, new_vertex: VertexId, moved: &[EdgeHandle]) -> Option<EdgeHandle> {
        self.grow(g);
        for &h in moved {
            match self.st(h) {
                NON_TREE => {
                    self.tally(vertex, -1);
                    self.tally(new_vertex, 1);
                }
                TREE => {
                    let y = g.edge(h).expect("moved edge exists").other(new_vertex);
                    self.cut(h);
                    self.link(h, new_vertex, y);
                }
                _ => {}
            }
        }
        self.reconnect(g, vertex, new_vertex)
    }

    /// Links the cheapest layer edge between the trees of `a` and `b`, if they
    /// are different trees and such an edge exists.
    fn reconnect(&mut self, g: &DynamicMultiGraph, a: VertexId, b: VertexId) -> Option<EdgeHandle> {
        let (a, b) = (a.index(), b.index());
        if self.ett.connected(a, b) {
            return None;
        }
        let (small, other) = if self.ett.component_sum(a) <= self.ett.component_sum(b) { (a, b) } else { (b, a) };
        if self.ett.component_sum(small) == 0 {
            return None;
        }
        let target = self.ett.tree_id(other);
        let mut best: Option<(EdgeHandle, VertexId, VertexId)> = None;
        for x in self.ett.component_vertices(small) {
            let xv = VertexId(x as u32);
            for &h in g.incident(xv) {
                if self.st(h) != NON_TREE || best.is_some_and(|(b, _, _)| b < h) {
                    continue;
                }
                let y = g.edge(h).expect("incident edge exists").other(xv);
                if self.ett.tree_id(y.index()) == target {
                    best = Some((h, xv, y));
                }
            }
        }
        let (h, x, y) = best?;
        self.tally(x, -1);
        self.tally(y, -1);
        self.link(h, x, y);
        Some(h)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RecourseRecord {
    pub inserted: Vec<EdgeHandle>,
    pub deleted: Vec<EdgeHandle>,
    pub splits: usize,
}

impl RecourseRecord {
    /// Checks the per-update bound for the update kind that produced it.
    pub fn within_bounds(&self, update: &AppliedUpdate) -> bool {
        let (i, d) = (self.inserted.len(), self.deleted.len());
        match update {
            AppliedUpdate::Inserted { .. } => i <= 1 && d == 0,
            AppliedUpdate::Deleted { edge, .. } => i <= 1 && d <= 1 && self.deleted.iter().all(|e| e == edge),
            AppliedUpdate::Split(_) => i <= 1 && d == 0,
            AppliedUpdate::VertexAdded(_) => i == 0 && d == 0,
        }
    }
}

/// Minimum spanning forest of a whole graph.
#[derive(Clone, Debug)]
pub struct DynamicMsf {
    layer: LayerForest,
}

impl DynamicMsf {
    pub fn new(g: &DynamicMultiGraph) -> Self {
        let mut layer = LayerForest::new(g.vertex_bound());
        let handles: Vec<EdgeHandle> = g.edges().map(|(h, _)| h).collect();
        for h in handles {
            layer.insert(g, h);
        }
        DynamicMsf { layer }
    }

    /// Absorbs an update that `g` has already applied.
    pub fn apply(&mut self, g: &DynamicMultiGraph, update: &AppliedUpdate) -> RecourseRecord {
        let change = match update {
            AppliedUpdate::Inserted { edge, .. } => self.layer.insert(g, *edge),
            AppliedUpdate::Deleted { edge, u, v, .. } => self.layer.delete(g, *edge, *u, *v),
            AppliedUpdate::Split(s) => {
                LayerChange { added: self.layer.split(g, s.vertex, s.new_vertex, &s.moved), removed: None }
            }
            AppliedUpdate::VertexAdded(_) => {
                self.layer.grow(g);
                LayerChange::default()
            }
        };
        RecourseRecord {
            inserted: change.added.into_iter().collect(),
            deleted: change.removed.into_iter().collect(),
            splits: usize::from(matches!(update, AppliedUpdate::Split(_))),
        }
    }

    pub fn forest(&self) -> Vec<EdgeHandle> {
        self.layer.tree_edges()
    }

    pub fn contains(&self, h: EdgeHandle) -> bool {
        self.layer.is_tree(h)
    }

    pub fn connected(&self, a: VertexId, b: VertexId) -> bool {
        self.layer.connected(a, b)
    }
}
