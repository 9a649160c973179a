//! Sparsity of the cuts that separate a subtree from the rest, for every edge
//! of a decremental rooted forest.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::forest::EulerTourForest;
use crate::graph::Capacity;

/// Sparsity of the subtree below each forest edge, `cap / min(w, W - w)`,
/// kept in an ordered set so the minimum is at hand after deletions.
pub struct ForestCutTracker {
    edges: Vec<(usize, usize, Capacity)>,
    /// Child endpoint of every edge under the initial rooting.
    child: Vec<usize>,
    parent_edge: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
    alive: Vec<bool>,
    tour: EulerTourForest,
    total: i64,
    score: Vec<Option<Capacity>>,
    order: BTreeSet<(Capacity, usize)>,
}

impl ForestCutTracker {
    /// `roots` must hold one vertex per tree; `weights` are positive vertex
    /// weights.
    pub fn new(n: usize, edges: &[(usize, usize, Capacity)], roots: &[usize], weights: &[u64]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            adj[e.0].push((e.1, i));
            adj[e.1].push((e.0, i));
        }
        let mut parent = vec![None; n];
        let mut parent_edge = vec![None; n];
        let mut child = vec![usize::MAX; edges.len()];
        let mut seen = vec![false; n];
        let mut tour = EulerTourForest::new(n);
        for &r in roots {
            seen[r] = true;
            let mut stack = vec![r];
            while let Some(x) = stack.pop() {
                for &(y, i) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        parent[y] = Some(x);
                        parent_edge[y] = Some(i);
                        child[i] = y;
                        tour.link(y, x, i as u64);
                        stack.push(y);
                    }
                }
            }
        }
        for (v, &w) in weights.iter().enumerate() {
            tour.set_value(v, w as i64);
        }
        let total = weights.iter().map(|&w| w as i64).sum();
        let mut t = ForestCutTracker {
            edges: edges.to_vec(),
            child,
            parent_edge,
            parent,
            alive: vec![true; edges.len()],
            tour,
            total,
            score: vec![None; edges.len()],
            order: BTreeSet::new(),
        };
        for i in 0..edges.len() {
            t.refresh(i);
        }
        t
    }

    /// Weight of the subtree below edge `i`.
    pub fn below(&self, i: usize) -> i64 {
        self.tour.side_sum(i as u64, self.child[i]).expect("live edge")
    }

    /// Total weight of the tree rooted at `v`, for a root `v`.
    pub fn tree_weight(&self, v: usize) -> i64 {
        self.tour.component_sum(v)
    }

    fn sparsity(&self, i: usize) -> Option<Capacity> {
        let w = self.below(i);
        let d = w.min(self.total - w);
        (d > 0).then(|| self.edges[i].2 / Capacity::from_integer(d as i128))
    }

    fn refresh(&mut self, i: usize) {
        if let Some(old) = self.score[i].take() {
            self.order.remove(&(old, i));
        }
        if self.alive[i] {
            self.score[i] = self.sparsity(i);
            if let Some(s) = self.score[i] {
                self.order.insert((s, i));
            }
        }
    }

    /// Smallest sparsity and its edge.
    pub fn min(&self) -> Option<(Capacity, usize)> {
        self.order.iter().next().copied()
    }

    /// Removes edge `i`; the subtree below becomes a tree of its own and the
    /// sparsities of edges above it are refreshed.
    pub fn delete(&mut self, i: usize) {
        if !self.alive[i] {
            return;
        }
        self.alive[i] = false;
        self.refresh(i);
        let c = self.child[i];
        let mut x = self.parent[c].expect("child has a parent");
        self.parent[c] = None;
        self.parent_edge[c] = None;
        self.tour.cut(i as u64);
        while let Some(e) = self.parent_edge[x] {
            self.refresh(e);
            x = self.parent[x].expect("edge has a parent endpoint");
        }
    }

    /// Vertices of the subtree below edge `i`.
    pub fn side(&self, i: usize) -> Vec<usize> {
        let mut t = self.tour.clone();
        t.cut(i as u64);
        let mut vs = t.component_vertices(self.child[i]);
        vs.sort();
        vs
    }

    /// Minimum recomputed from scratch, for cross-checks.
    pub fn recompute_min(&self) -> Option<(Capacity, usize)> {
        (0..self.edges.len()).filter(|&i| self.alive[i]).filter_map(|i| self.sparsity(i).map(|s| (s, i))).min()
    }

    pub fn is_zero_weight(&self) -> bool {
        self.total.is_zero()
    }
}
