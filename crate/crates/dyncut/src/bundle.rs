//! Packing of edge-disjoint spanning forests, maintained under updates.
//!
//! Layer `k` holds every base edge that is not in the forests of layers
//! `0..k`, and keeps its own minimum spanning forest. An update enters layer 0
//! and cascades: whatever a layer gives up (an edge that stayed non-tree, an
//! edge it evicted, or an edge it absorbed as a replacement) becomes an event
//! for the next layer.
//!
//! Any base edge outside the union of the `depth` forests is connected by
//! `depth` edge-disjoint paths, one per forest.

use std::collections::HashMap;

use serde::Serialize;

use crate::graph::{AppliedUpdate, DynamicMultiGraph, EdgeHandle, VertexId};
use crate::msf::LayerForest;

/// Net change of the bundle caused by one update.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BundleRecourse {
    pub inserted: Vec<EdgeHandle>,
    pub deleted: Vec<EdgeHandle>,
    pub splits: usize,
}

impl BundleRecourse {
    pub fn within_bounds(&self, update: &AppliedUpdate, depth: usize) -> bool {
        let (i, d) = (self.inserted.len(), self.deleted.len());
        match update {
            AppliedUpdate::Inserted { .. } => i <= 1 && d == 0,
            AppliedUpdate::Deleted { .. } => i <= 1 && d <= 1,
            AppliedUpdate::Split(_) => i <= depth && d == 0,
            AppliedUpdate::VertexAdded(_) => i == 0 && d == 0,
        }
    }
}

#[derive(Clone, Debug)]
enum Event {
    Insert(EdgeHandle),
    Delete(EdgeHandle, VertexId, VertexId),
    Split(VertexId, VertexId),
}

#[derive(Clone, Debug)]
pub struct SpanningForestBundle {
    depth: usize,
    layers: Vec<LayerForest>,
    /// 1-based index of the forest holding each edge, 0 if none.
    forest_of: Vec<u16>,
    base: Vec<bool>,
    base_edges: usize,
    bundle_edges: usize,
}

impl SpanningForestBundle {
    pub fn new(depth: usize) -> Self {
        assert!(depth >= 1 && depth < u16::MAX as usize, "bundle depth out of range");
        SpanningForestBundle { depth, layers: Vec::new(), forest_of: Vec::new(), base: Vec::new(), base_edges: 0, bundle_edges: 0 }
    }

    /// Bundle over every edge of `g`.
    pub fn from_graph(g: &DynamicMultiGraph, depth: usize) -> Self {
        let mut b = Self::new(depth);
        let handles: Vec<EdgeHandle> = g.edges().map(|(h, _)| h).collect();
        for h in handles {
            b.insert(g, h);
        }
        b
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn in_base(&self, h: EdgeHandle) -> bool {
        self.base.get(h.index()).copied().unwrap_or(false)
    }

    pub fn contains(&self, h: EdgeHandle) -> bool {
        self.forest_index(h).is_some()
    }

    /// 0-based forest holding `h`.
    pub fn forest_index(&self, h: EdgeHandle) -> Option<usize> {
        match self.forest_of.get(h.index()).copied().unwrap_or(0) {
            0 => None,
            k => Some(k as usize - 1),
        }
    }

    pub fn base_edge_count(&self) -> usize {
        self.base_edges
    }

    pub fn bundle_edge_count(&self) -> usize {
        self.bundle_edges
    }

    pub fn bundle_edges(&self) -> Vec<EdgeHandle> {
        (0..self.forest_of.len()).filter(|&i| self.forest_of[i] != 0).map(|i| EdgeHandle(i as u32)).collect()
    }

    pub fn non_bundle_edges(&self) -> Vec<EdgeHandle> {
        (0..self.base.len()).filter(|&i| self.base[i] && self.forest_of[i] == 0).map(|i| EdgeHandle(i as u32)).collect()
    }

    pub fn forests(&self) -> Vec<Vec<EdgeHandle>> {
        self.layers.iter().map(|l| l.tree_edges()).collect()
    }

    fn grow(&mut self, g: &DynamicMultiGraph) {
        if self.base.len() < g.edge_bound() {
            self.base.resize(g.edge_bound(), false);
            self.forest_of.resize(g.edge_bound(), 0);
        }
    }

    /// Adds `h`, already present in `g`, to the base graph.
    pub fn insert(&mut self, g: &DynamicMultiGraph, h: EdgeHandle) -> BundleRecourse {
        self.grow(g);
        assert!(!self.base[h.index()], "edge already in the bundle base");
        self.base[h.index()] = true;
        self.base_edges += 1;
        self.cascade(g, vec![Event::Insert(h)], &[])
    }

    /// Removes `h` (with endpoints `u`, `v`) from the base graph. Edges that
    /// are not in the base are ignored.
    pub fn delete(&mut self, g: &DynamicMultiGraph, h: EdgeHandle, u: VertexId, v: VertexId) -> BundleRecourse {
        self.grow(g);
        if !self.in_base(h) {
            return BundleRecourse::default();
        }
        self.base[h.index()] = false;
        self.base_edges -= 1;
        self.cascade(g, vec![Event::Delete(h, u, v)], &[])
    }

    /// Mirrors a split already carried out by `g`. `moved` may list edges
    /// outside the base; layers skip them.
    pub fn split(&mut self, g: &DynamicMultiGraph, vertex: VertexId, new_vertex: VertexId, moved: &[EdgeHandle]) -> BundleRecourse {
        self.grow(g);
        let moved: Vec<EdgeHandle> = moved.iter().copied().filter(|&h| self.in_base(h)).collect();
        let mut r = self.cascade(g, vec![Event::Split(vertex, new_vertex)], &moved);
        r.splits = 1;
        r
    }

    /// Absorbs an update applied to `g`, treating every edge of `g` as base.
    pub fn apply(&mut self, g: &DynamicMultiGraph, update: &AppliedUpdate) -> BundleRecourse {
        match update {
            AppliedUpdate::Inserted { edge, .. } => self.insert(g, *edge),
            AppliedUpdate::Deleted { edge, u, v, .. } => self.delete(g, *edge, *u, *v),
            AppliedUpdate::Split(s) => self.split(g, s.vertex, s.new_vertex, &s.moved),
            AppliedUpdate::VertexAdded(_) => BundleRecourse::default(),
        }
    }

    fn cascade(&mut self, g: &DynamicMultiGraph, first: Vec<Event>, moved: &[EdgeHandle]) -> BundleRecourse {
        let mut log = Touched::default();
        let mut queue = first;
        for k in 0..self.depth {
            if queue.is_empty() || (k == self.layers.len() && !queue.iter().any(|e| matches!(e, Event::Insert(_)))) {
                break;
            }
            queue = self.run_layer(g, k, queue, moved, &mut log);
        }
        log.finish(self)
    }

    fn run_layer(&mut self, g: &DynamicMultiGraph, k: usize, queue: Vec<Event>, moved: &[EdgeHandle], log: &mut Touched) -> Vec<Event> {
        if k == self.layers.len() {
            self.layers.push(LayerForest::new(g.vertex_bound()));
        }
        let mut next = Vec::new();
        for ev in queue {
            match ev {
                Event::Insert(h) => {
                    let ch = self.layers[k].insert(g, h);
                    if ch.added == Some(h) {
                        log.see(self, h);
                        self.set_forest(h, Some(k));
                    } else {
                        next.push(Event::Insert(h));
                    }
                    if let Some(m) = ch.removed {
                        log.see(self, m);
                        self.set_forest(m, None);
                        next.push(Event::Insert(m));
                    }
                }
                Event::Delete(h, u, v) => {
                    let was_tree = self.layers[k].is_tree(h);
                    let ch = self.layers[k].delete(g, h, u, v);
                    if was_tree {
                        // An edge absorbed by an earlier layer already points there.
                        if self.forest_index(h) == Some(k) {
                            log.see(self, h);
                            self.set_forest(h, None);
                        }
                    } else {
                        next.push(Event::Delete(h, u, v));
                    }
                    if let Some(r) = ch.added {
                        self.absorb(g, k, r, log, &mut next);
                    }
                }
                Event::Split(vertex, new_vertex) => {
                    let here: Vec<EdgeHandle> = moved.iter().copied().filter(|&h| self.layers[k].contains(h)).collect();
                    let added = self.layers[k].split(g, vertex, new_vertex, &here);
                    next.insert(0, Event::Split(vertex, new_vertex));
                    if let Some(r) = added {
                        self.absorb(g, k, r, log, &mut next);
                    }
                }
            }
        }
        next
    }

    fn absorb(&mut self, g: &DynamicMultiGraph, k: usize, r: EdgeHandle, log: &mut Touched, next: &mut Vec<Event>) {
        // During a split, layer `k` may relink an edge that an earlier layer
        // absorbed and whose deletion is still queued here.
        if self.forest_index(r).is_none_or(|j| j > k) {
            log.see(self, r);
            self.set_forest(r, Some(k));
        }
        let (a, b) = g.endpoints(r).expect("replacement edge exists");
        next.push(Event::Delete(r, a, b));
    }

    fn set_forest(&mut self, h: EdgeHandle, k: Option<usize>) {
        let old = self.forest_of[h.index()];
        let new = k.map_or(0, |k| k as u16 + 1);
        match (old, new) {
            (0, n) if n != 0 => self.bundle_edges += 1,
            (o, 0) if o != 0 => self.bundle_edges -= 1,
            _ => {}
        }
        self.forest_of[h.index()] = new;
    }
}

/// Bundle membership of every edge touched during one cascade, as it was
/// before the cascade started.
#[derive(Default)]
struct Touched {
    order: Vec<EdgeHandle>,
    before: HashMap<EdgeHandle, bool>,
}

impl Touched {
    fn see(&mut self, b: &SpanningForestBundle, h: EdgeHandle) {
        if let std::collections::hash_map::Entry::Vacant(e) = self.before.entry(h) {
            e.insert(b.contains(h));
            self.order.push(h);
        }
    }

    fn finish(self, b: &SpanningForestBundle) -> BundleRecourse {
        let mut r = BundleRecourse::default();
        for h in self.order {
            match (self.before[&h], b.contains(h)) {
                (false, true) => r.inserted.push(h),
                (true, false) => r.deleted.push(h),
                _ => {}
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cap, GraphUpdate};

    fn complete(n: u32) -> DynamicMultiGraph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v, cap(1)));
            }
        }
        DynamicMultiGraph::from_edges(n as usize, &e).unwrap()
    }

    #[test]
    fn triangle_third_edge_stays_outside_single_forest() {
        let mut g = DynamicMultiGraph::from_edges(3, &[(0, 1, cap(1)), (1, 2, cap(1))]).unwrap();
        let mut b = SpanningForestBundle::from_graph(&g, 1);
        let a = g.apply(&GraphUpdate::Insert { u: VertexId(0), v: VertexId(2), cap: cap(1) }).unwrap();
        assert_eq!(b.apply(&g, &a), BundleRecourse::default());
        assert_eq!(b.non_bundle_edges(), vec![EdgeHandle(2)]);
    }

    #[test]
    fn two_forests_of_k4_leave_one_edge() {
        let g = complete(4);
        let b = SpanningForestBundle::from_graph(&g, 2);
        let f = b.forests();
        assert_eq!(f[0].len(), 3);
        assert_eq!(f[1].len(), 2);
        assert_eq!(b.non_bundle_edges().len(), 1);
    }

    #[test]
    fn deleting_first_forest_edge_cascades_one_layer_down() {
        let mut g = complete(4);
        let mut b = SpanningForestBundle::from_graph(&g, 2);
        let first = b.forests()[0][0];
        let a = g.apply(&GraphUpdate::Delete { edge: first }).unwrap();
        let r = b.apply(&g, &a);
        assert!(r.within_bounds(&a, 2), "{r:?} {:?}", b.forests());
        assert_eq!(r.deleted, vec![first]);
        assert_eq!(b.bundle_edge_count(), 5);
    }

    #[test]
    fn depth_at_least_edge_count_keeps_everything() {
        let g = complete(5);
        let b = SpanningForestBundle::from_graph(&g, 10);
        assert!(b.non_bundle_edges().is_empty());
        let empty = SpanningForestBundle::from_graph(&DynamicMultiGraph::with_vertices(3), 2);
        assert!(empty.bundle_edges().is_empty() && empty.non_bundle_edges().is_empty());
    }
}
