//! Dynamic capacitated multigraph with stable vertex ids, stable edge handles
//! and vertex splits.
//!
//! Every mutation returns an [`AppliedUpdate`] carrying the ids it used, so a
//! second graph can [`replay`](DynamicMultiGraph::replay) it and stay aligned
//! id-for-id. Downstream structures (forests, sparsifier layers, cores) are kept
//! in sync this way.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact edge capacity.
pub type Capacity = Ratio<i128>;

pub fn cap(n: i128) -> Capacity {
    Ratio::from_integer(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeHandle(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeHandle {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0:?} does not exist")]
    UnknownVertex(VertexId),
    #[error("edge {0:?} does not exist")]
    UnknownEdge(EdgeHandle),
    #[error("self-loop at {0:?}")]
    SelfLoop(VertexId),
    #[error("capacity must be positive")]
    NonPositiveCapacity,
    #[error("edge {0:?} is not incident to {1:?}")]
    NotIncident(EdgeHandle, VertexId),
    #[error("vertex id {0:?} already in use")]
    VertexInUse(VertexId),
    #[error("edge handle {0:?} already in use")]
    EdgeInUse(EdgeHandle),
    #[error("edge {0:?} listed twice in a split")]
    DuplicateEdge(EdgeHandle),
}

#[derive(Clone, Debug)]
pub struct EdgeRecord {
    pub u: VertexId,
    pub v: VertexId,
    pub cap: Capacity,
    pos_u: usize,
    pos_v: usize,
}

impl EdgeRecord {
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }
}

/// Request form of an update.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphUpdate {
    Insert { u: VertexId, v: VertexId, cap: Capacity },
    Delete { edge: EdgeHandle },
    /// Move `moved` (all incident to `vertex`) to a fresh vertex.
    Split { vertex: VertexId, moved: Vec<EdgeHandle> },
}

/// A split as it was physically carried out: `moved` now sits on `new_vertex`.
///
/// When the requested set was larger than half the degree, the complement is
/// moved instead and `swapped` is set; the requested edges then stay on
/// `vertex`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexSplit {
    pub vertex: VertexId,
    pub new_vertex: VertexId,
    pub moved: Vec<EdgeHandle>,
    pub swapped: bool,
}

impl VertexSplit {
    /// Vertex that holds the edges the caller asked to move.
    pub fn requested_side(&self) -> VertexId {
        if self.swapped {
            self.vertex
        } else {
            self.new_vertex
        }
    }

    pub fn remaining_side(&self) -> VertexId {
        if self.swapped {
            self.new_vertex
        } else {
            self.vertex
        }
    }
}

/// Resolved form of an update, suitable for replay on a mirror.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AppliedUpdate {
    Inserted { edge: EdgeHandle, u: VertexId, v: VertexId, cap: Capacity },
    Deleted { edge: EdgeHandle, u: VertexId, v: VertexId, cap: Capacity },
    Split(VertexSplit),
    VertexAdded(VertexId),
}

pub type UpdateBatch = Vec<AppliedUpdate>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GraphCounters {
    pub inserts: u64,
    pub deletes: u64,
    pub splits: u64,
    pub moved_edges: u64,
}

#[derive(Clone, Debug, Default)]
struct VertexSlot {
    alive: bool,
    adj: Vec<EdgeHandle>,
}

#[derive(Clone, Debug, Default)]
pub struct DynamicMultiGraph {
    vertices: Vec<VertexSlot>,
    edges: Vec<Option<EdgeRecord>>,
    live_vertices: usize,
    live_edges: usize,
    counters: GraphCounters,
}

impl DynamicMultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_vertex();
        }
        g
    }

    /// Builds a graph on `0..n` from an edge list; handles follow list order.
    pub fn from_edges(n: usize, edges: &[(u32, u32, Capacity)]) -> Result<Self, GraphError> {
        let mut g = Self::with_vertices(n);
        for &(u, v, c) in edges {
            g.insert_edge(VertexId(u), VertexId(v), c)?;
        }
        g.counters = GraphCounters::default();
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.live_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.live_edges
    }

    /// One past the largest vertex id ever allocated.
    pub fn vertex_bound(&self) -> usize {
        self.vertices.len()
    }

    /// One past the largest edge handle ever allocated.
    pub fn edge_bound(&self) -> usize {
        self.edges.len()
    }

    pub fn counters(&self) -> &GraphCounters {
        &self.counters
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.get(v.index()).is_some_and(|s| s.alive)
    }

    pub fn has_edge(&self, e: EdgeHandle) -> bool {
        self.edge(e).is_some()
    }

    pub fn edge(&self, e: EdgeHandle) -> Option<&EdgeRecord> {
        self.edges.get(e.index()).and_then(|r| r.as_ref())
    }

    pub fn endpoints(&self, e: EdgeHandle) -> Option<(VertexId, VertexId)> {
        self.edge(e).map(|r| (r.u, r.v))
    }

    pub fn capacity(&self, e: EdgeHandle) -> Option<Capacity> {
        self.edge(e).map(|r| r.cap)
    }

    pub fn incident(&self, v: VertexId) -> &[EdgeHandle] {
        self.vertices.get(v.index()).map(|s| s.adj.as_slice()).unwrap_or(&[])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, s)| s.alive)
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeHandle, &EdgeRecord)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.as_ref().map(|r| (EdgeHandle(i as u32), r)))
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId(self.vertices.len() as u32);
        self.vertices.push(VertexSlot { alive: true, adj: Vec::new() });
        self.live_vertices += 1;
        id
    }

    pub fn add_vertex_with_id(&mut self, id: VertexId) -> Result<(), GraphError> {
        if self.has_vertex(id) {
            return Err(GraphError::VertexInUse(id));
        }
        if self.vertices.len() <= id.index() {
            self.vertices.resize_with(id.index() + 1, VertexSlot::default);
        }
        self.vertices[id.index()].alive = true;
        self.live_vertices += 1;
        Ok(())
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId, c: Capacity) -> Result<EdgeHandle, GraphError> {
        let h = EdgeHandle(self.edges.len() as u32);
        self.insert_edge_with_handle(h, u, v, c)?;
        Ok(h)
    }

    pub fn insert_edge_with_handle(
        &mut self,
        h: EdgeHandle,
        u: VertexId,
        v: VertexId,
        c: Capacity,
    ) -> Result<(), GraphError> {
        for x in [u, v] {
            if !self.has_vertex(x) {
                return Err(GraphError::UnknownVertex(x));
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !c.is_positive() {
            return Err(GraphError::NonPositiveCapacity);
        }
        if self.has_edge(h) {
            return Err(GraphError::EdgeInUse(h));
        }
        if self.edges.len() <= h.index() {
            self.edges.resize(h.index() + 1, None);
        }
        let pos_u = self.vertices[u.index()].adj.len();
        self.vertices[u.index()].adj.push(h);
        let pos_v = self.vertices[v.index()].adj.len();
        self.vertices[v.index()].adj.push(h);
        self.edges[h.index()] = Some(EdgeRecord { u, v, cap: c, pos_u, pos_v });
        self.live_edges += 1;
        self.counters.inserts += 1;
        Ok(())
    }

    fn detach(&mut self, x: VertexId, pos: usize) {
        let adj = &mut self.vertices[x.index()].adj;
        adj.swap_remove(pos);
        if pos < adj.len() {
            let moved = adj[pos];
            let rec = self.edges[moved.index()].as_mut().expect("adjacent edge is live");
            // A moved entry can only be at the slot `x` owns in that record.
            if rec.u == x && rec.pos_u == adj.len() {
                rec.pos_u = pos;
            } else {
                rec.pos_v = pos;
            }
        }
    }

    fn attach(&mut self, h: EdgeHandle, x: VertexId) -> usize {
        let adj = &mut self.vertices[x.index()].adj;
        adj.push(h);
        adj.len() - 1
    }

    pub fn delete_edge(&mut self, h: EdgeHandle) -> Result<EdgeRecord, GraphError> {
        let rec = self
            .edges
            .get_mut(h.index())
            .and_then(|r| r.take())
            .ok_or(GraphError::UnknownEdge(h))?;
        self.detach(rec.u, rec.pos_u);
        self.detach(rec.v, rec.pos_v);
        self.live_edges -= 1;
        self.counters.deletes += 1;
        Ok(rec)
    }

    fn check_split(&self, v: VertexId, moved: &[EdgeHandle]) -> Result<(), GraphError> {
        if !self.has_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        let mut seen = std::collections::HashSet::with_capacity(moved.len());
        for &h in moved {
            let rec = self.edge(h).ok_or(GraphError::UnknownEdge(h))?;
            if rec.u != v && rec.v != v {
                return Err(GraphError::NotIncident(h, v));
            }
            if !seen.insert(h) {
                return Err(GraphError::DuplicateEdge(h));
            }
        }
        Ok(())
    }

    /// Splits `v`, moving the smaller of `moved` and its complement to a fresh
    /// vertex.
    pub fn split_vertex(&mut self, v: VertexId, moved: &[EdgeHandle]) -> Result<VertexSplit, GraphError> {
        self.check_split(v, moved)?;
        let deg = self.degree(v);
        let swapped = 2 * moved.len() > deg;
        let physical: Vec<EdgeHandle> = if swapped {
            let keep: std::collections::HashSet<EdgeHandle> = moved.iter().copied().collect();
            self.incident(v).iter().copied().filter(|h| !keep.contains(h)).collect()
        } else {
            moved.to_vec()
        };
        let w = self.add_vertex();
        self.move_edges(v, w, &physical);
        Ok(VertexSplit { vertex: v, new_vertex: w, moved: physical, swapped })
    }

    /// Splits `v` into a caller-chosen fresh id `w`, moving exactly `moved`.
    pub fn split_vertex_into(&mut self, v: VertexId, w: VertexId, moved: &[EdgeHandle]) -> Result<(), GraphError> {
        self.check_split(v, moved)?;
        self.add_vertex_with_id(w)?;
        self.move_edges(v, w, moved);
        Ok(())
    }

    fn move_edges(&mut self, v: VertexId, w: VertexId, moved: &[EdgeHandle]) {
        for &h in moved {
            let rec = self.edges[h.index()].as_ref().expect("checked");
            let (at_u, pos) = if rec.u == v { (true, rec.pos_u) } else { (false, rec.pos_v) };
            self.detach(v, pos);
            let np = self.attach(h, w);
            let rec = self.edges[h.index()].as_mut().expect("checked");
            if at_u {
                rec.u = w;
                rec.pos_u = np;
            } else {
                rec.v = w;
                rec.pos_v = np;
            }
        }
        self.counters.splits += 1;
        self.counters.moved_edges += moved.len() as u64;
    }

    pub fn apply(&mut self, update: &GraphUpdate) -> Result<AppliedUpdate, GraphError> {
        match update {
            GraphUpdate::Insert { u, v, cap } => {
                let edge = self.insert_edge(*u, *v, *cap)?;
                Ok(AppliedUpdate::Inserted { edge, u: *u, v: *v, cap: *cap })
            }
            GraphUpdate::Delete { edge } => {
                let rec = self.delete_edge(*edge)?;
                Ok(AppliedUpdate::Deleted { edge: *edge, u: rec.u, v: rec.v, cap: rec.cap })
            }
            GraphUpdate::Split { vertex, moved } => Ok(AppliedUpdate::Split(self.split_vertex(*vertex, moved)?)),
        }
    }

    /// Re-applies an update produced by another graph, using its ids.
    pub fn replay(&mut self, update: &AppliedUpdate) -> Result<(), GraphError> {
        match update {
            AppliedUpdate::Inserted { edge, u, v, cap } => self.insert_edge_with_handle(*edge, *u, *v, *cap),
            AppliedUpdate::Deleted { edge, .. } => self.delete_edge(*edge).map(|_| ()),
            AppliedUpdate::Split(s) => self.split_vertex_into(s.vertex, s.new_vertex, &s.moved),
            AppliedUpdate::VertexAdded(v) => self.add_vertex_with_id(*v),
        }
    }

    /// Total capacity of edges with exactly one endpoint on the `side` where
    /// the predicate holds.
    pub fn cut_value(&self, side: impl Fn(VertexId) -> bool) -> Capacity {
        let mut total = Capacity::zero();
        for (_, r) in self.edges() {
            if side(r.u) != side(r.v) {
                total += r.cap;
            }
        }
        total
    }

    pub fn total_capacity(&self) -> Capacity {
        self.edges().fold(Capacity::zero(), |acc, (_, r)| acc + r.cap)
    }

    /// Degree potential: sum over vertices of deg * log2(deg).
    pub fn potential(&self) -> f64 {
        self.vertices
            .iter()
            .filter(|s| s.alive && s.adj.len() > 1)
            .map(|s| {
                let d = s.adj.len() as f64;
                d * d.log2()
            })
            .sum()
    }

    /// Dense snapshot: live vertices in id order and edges over their ranks.
    pub fn to_edge_list(&self) -> (Vec<VertexId>, Vec<(usize, usize, Capacity)>) {
        let ids: Vec<VertexId> = self.vertices().collect();
        let mut rank = vec![usize::MAX; self.vertex_bound()];
        for (i, v) in ids.iter().enumerate() {
            rank[v.index()] = i;
        }
        let edges = self
            .edges()
            .map(|(_, r)| (rank[r.u.index()], rank[r.v.index()], r.cap))
            .collect();
        (ids, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> DynamicMultiGraph {
        DynamicMultiGraph::from_edges(3, &[(0, 1, cap(1)), (1, 2, cap(2)), (0, 2, cap(3))]).unwrap()
    }

    #[test]
    fn insert_delete_keeps_adjacency_positions() {
        let mut g = triangle();
        let e = g.insert_edge(VertexId(0), VertexId(1), cap(5)).unwrap();
        assert_eq!(g.degree(VertexId(0)), 3);
        g.delete_edge(EdgeHandle(0)).unwrap();
        assert_eq!(g.degree(VertexId(0)), 2);
        assert!(g.incident(VertexId(0)).contains(&e));
        assert!(g.incident(VertexId(1)).contains(&e));
        g.delete_edge(e).unwrap();
        assert_eq!(g.incident(VertexId(1)), &[EdgeHandle(1)]);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn rejects_bad_updates() {
        let mut g = triangle();
        assert_eq!(g.insert_edge(VertexId(1), VertexId(1), cap(1)), Err(GraphError::SelfLoop(VertexId(1))));
        assert_eq!(g.insert_edge(VertexId(0), VertexId(1), cap(0)), Err(GraphError::NonPositiveCapacity));
        assert_eq!(g.delete_edge(EdgeHandle(9)).unwrap_err(), GraphError::UnknownEdge(EdgeHandle(9)));
        assert_eq!(
            g.split_vertex(VertexId(0), &[EdgeHandle(1)]).unwrap_err(),
            GraphError::NotIncident(EdgeHandle(1), VertexId(0))
        );
    }

    #[test]
    fn split_moves_smaller_side() {
        let mut g = DynamicMultiGraph::with_vertices(4);
        let a = g.insert_edge(VertexId(0), VertexId(1), cap(1)).unwrap();
        let b = g.insert_edge(VertexId(0), VertexId(2), cap(1)).unwrap();
        let c = g.insert_edge(VertexId(0), VertexId(3), cap(1)).unwrap();
        let s = g.split_vertex(VertexId(0), &[a, b]).unwrap();
        assert!(s.swapped);
        assert_eq!(s.moved, vec![c]);
        assert_eq!(g.endpoints(c), Some((s.new_vertex, VertexId(3))));
        assert_eq!(s.requested_side(), VertexId(0));
        assert_eq!(g.counters().moved_edges, 1);
    }

    #[test]
    fn split_with_no_edges_creates_isolated_vertex() {
        let mut g = triangle();
        let s = g.split_vertex(VertexId(2), &[]).unwrap();
        assert_eq!(g.degree(s.new_vertex), 0);
        assert_eq!(g.vertex_count(), 4);
    }

    #[test]
    fn replay_keeps_mirror_aligned() {
        let mut g = triangle();
        let mut m = g.clone();
        let ups = [
            GraphUpdate::Insert { u: VertexId(0), v: VertexId(1), cap: cap(4) },
            GraphUpdate::Split { vertex: VertexId(0), moved: vec![EdgeHandle(3)] },
            GraphUpdate::Delete { edge: EdgeHandle(1) },
        ];
        for u in &ups {
            let a = g.apply(u).unwrap();
            m.replay(&a).unwrap();
        }
        let lhs: Vec<_> = g.edges().map(|(h, r)| (h, r.u, r.v, r.cap)).collect();
        let rhs: Vec<_> = m.edges().map(|(h, r)| (h, r.u, r.v, r.cap)).collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cut_value_matches_edge_scan() {
        let g = triangle();
        assert_eq!(g.cut_value(|v| v == VertexId(0)), cap(4));
        assert_eq!(g.cut_value(|v| v == VertexId(2)), cap(5));
    }
}
