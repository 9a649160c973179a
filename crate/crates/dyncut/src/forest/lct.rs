//! Link-cut forest with keyed edges and path-minimum queries.
//!
//! Edges are represented as their own nodes so that a path aggregate ranges
//! over edge keys only. Keys are compared as `(key, edge_id)`, which makes the
//! minimum unique even when keys repeat.

use std::collections::HashMap;

const NIL: usize = usize::MAX;

#[derive(Clone, Debug)]
struct Node<K> {
    ch: [usize; 2],
    parent: usize,
    rev: bool,
    vertex: usize,
    val: Option<(K, u64)>,
    agg: Option<(K, u64)>,
}

impl<K> Node<K> {
    fn new(vertex: usize, val: Option<(K, u64)>) -> Self
    where
        K: Clone,
    {
        Node { ch: [NIL, NIL], parent: NIL, rev: false, vertex, agg: val.clone(), val }
    }
}

#[derive(Clone, Debug)]
struct EdgeSlot {
    node: usize,
    a: usize,
    b: usize,
}

#[derive(Clone, Debug)]
pub struct LinkCutForest<K> {
    nodes: Vec<Node<K>>,
    vertex_node: Vec<usize>,
    edges: HashMap<u64, EdgeSlot>,
    free: Vec<usize>,
}

fn min_opt<K: Ord + Clone>(a: &Option<(K, u64)>, b: &Option<(K, u64)>) -> Option<(K, u64)> {
    match (a, b) {
        (None, x) | (x, None) => x.clone(),
        (Some(x), Some(y)) => Some(if x <= y { x.clone() } else { y.clone() }),
    }
}

impl<K: Ord + Clone> LinkCutForest<K> {
    pub fn new(n: usize) -> Self {
        let mut f = LinkCutForest { nodes: Vec::new(), vertex_node: Vec::new(), edges: HashMap::new(), free: Vec::new() };
        f.ensure_vertices(n);
        f
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_node.len()
    }

    pub fn ensure_vertices(&mut self, n: usize) {
        while self.vertex_node.len() < n {
            let v = self.vertex_node.len();
            self.nodes.push(Node::new(v, None));
            self.vertex_node.push(self.nodes.len() - 1);
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        let v = self.vertex_node.len();
        self.ensure_vertices(v + 1);
        v
    }

    pub fn has_edge(&self, id: u64) -> bool {
        self.edges.contains_key(&id)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_endpoints(&self, id: u64) -> Option<(usize, usize)> {
        self.edges.get(&id).map(|s| (s.a, s.b))
    }

    pub fn edge_key(&self, id: u64) -> Option<&K> {
        self.edges.get(&id).and_then(|s| self.nodes[s.node].val.as_ref().map(|(k, _)| k))
    }

    fn is_splay_root(&self, x: usize) -> bool {
        let p = self.nodes[x].parent;
        p == NIL || (self.nodes[p].ch[0] != x && self.nodes[p].ch[1] != x)
    }

    fn push(&mut self, x: usize) {
        if self.nodes[x].rev {
            self.nodes[x].ch.swap(0, 1);
            for c in self.nodes[x].ch {
                if c != NIL {
                    self.nodes[c].rev ^= true;
                }
            }
            self.nodes[x].rev = false;
        }
    }

    fn pull(&mut self, x: usize) {
        let [l, r] = self.nodes[x].ch;
        let mut agg = self.nodes[x].val.clone();
        if l != NIL {
            agg = min_opt(&agg, &self.nodes[l].agg);
        }
        if r != NIL {
            agg = min_opt(&agg, &self.nodes[r].agg);
        }
        self.nodes[x].agg = agg;
    }

    fn rotate(&mut self, x: usize) {
        let p = self.nodes[x].parent;
        let g = self.nodes[p].parent;
        let dir = usize::from(self.nodes[p].ch[1] == x);
        let b = self.nodes[x].ch[1 - dir];
        if !self.is_splay_root(p) {
            let pd = usize::from(self.nodes[g].ch[1] == p);
            self.nodes[g].ch[pd] = x;
        }
        self.nodes[x].parent = g;
        self.nodes[x].ch[1 - dir] = p;
        self.nodes[p].parent = x;
        self.nodes[p].ch[dir] = b;
        if b != NIL {
            self.nodes[b].parent = p;
        }
        self.pull(p);
        self.pull(x);
    }

    fn splay(&mut self, x: usize) {
        let mut stack = vec![x];
        let mut y = x;
        while !self.is_splay_root(y) {
            y = self.nodes[y].parent;
            stack.push(y);
        }
        while let Some(z) = stack.pop() {
            self.push(z);
        }
        while !self.is_splay_root(x) {
            let p = self.nodes[x].parent;
            if !self.is_splay_root(p) {
                let g = self.nodes[p].parent;
                let zigzig = (self.nodes[g].ch[0] == p) == (self.nodes[p].ch[0] == x);
                self.rotate(if zigzig { p } else { x });
            }
            self.rotate(x);
        }
    }

    fn access(&mut self, x: usize) {
        let mut last = NIL;
        let mut y = x;
        while y != NIL {
            self.splay(y);
            self.nodes[y].ch[1] = last;
            self.pull(y);
            last = y;
            y = self.nodes[y].parent;
        }
        self.splay(x);
    }

    fn make_root_node(&mut self, x: usize) {
        self.access(x);
        self.nodes[x].rev ^= true;
        self.push(x);
    }

    fn find_root_node(&mut self, x: usize) -> usize {
        self.access(x);
        let mut y = x;
        loop {
            self.push(y);
            let l = self.nodes[y].ch[0];
            if l == NIL {
                break;
            }
            y = l;
        }
        self.splay(y);
        y
    }

    pub fn make_root(&mut self, v: usize) {
        let x = self.vertex_node[v];
        self.make_root_node(x);
    }

    pub fn find_root(&mut self, v: usize) -> usize {
        let x = self.vertex_node[v];
        let r = self.find_root_node(x);
        self.nodes[r].vertex
    }

    pub fn connected(&mut self, a: usize, b: usize) -> bool {
        a == b || self.find_root(a) == self.find_root(b)
    }

    /// Links `a`'s tree below `b`; the root of `b`'s tree stays the root.
    /// Returns false (and does nothing) if already connected or the id is taken.
    pub fn link(&mut self, a: usize, b: usize, id: u64, key: K) -> bool {
        if self.edges.contains_key(&id) || self.connected(a, b) {
            return false;
        }
        let e = match self.free.pop() {
            Some(e) => {
                self.nodes[e] = Node::new(NIL, Some((key, id)));
                e
            }
            None => {
                self.nodes.push(Node::new(NIL, Some((key, id))));
                self.nodes.len() - 1
            }
        };
        let xa = self.vertex_node[a];
        self.make_root_node(xa);
        self.nodes[xa].parent = e;
        self.nodes[e].parent = self.vertex_node[b];
        self.edges.insert(id, EdgeSlot { node: e, a, b });
        true
    }

    /// Removes edge `id`. The side that held the tree root keeps it; the other
    /// side is rooted at its endpoint of the removed edge.
    pub fn cut(&mut self, id: u64) -> Option<(usize, usize)> {
        let slot = self.edges.remove(&id)?;
        let e = slot.node;
        self.access(e);
        let up = self.nodes[e].ch[0];
        debug_assert!(up != NIL);
        self.nodes[up].parent = NIL;
        self.nodes[e].ch[0] = NIL;
        self.pull(e);
        // `e` now tops the lower part; detach it from the child endpoint.
        let child = if self.find_root_node(self.vertex_node[slot.a]) == e { slot.a } else { slot.b };
        let c = self.vertex_node[child];
        self.access(c);
        let l = self.nodes[c].ch[0];
        debug_assert_eq!(l, e);
        self.nodes[l].parent = NIL;
        self.nodes[c].ch[0] = NIL;
        self.pull(c);
        self.nodes[e] = Node::new(NIL, None);
        self.free.push(e);
        Some((slot.a, slot.b))
    }

    /// Minimum `(key, id)` on the path from `v` to its tree root.
    pub fn path_min(&mut self, v: usize) -> Option<(K, u64)> {
        let x = self.vertex_node[v];
        self.access(x);
        self.nodes[x].agg.clone()
    }

    /// Minimum `(key, id)` on the path between `a` and `b`; the tree root is
    /// restored afterwards.
    pub fn path_min_between(&mut self, a: usize, b: usize) -> Option<(K, u64)> {
        if !self.connected(a, b) {
            return None;
        }
        let r = self.find_root(a);
        self.make_root(a);
        let out = self.path_min(b);
        self.make_root(r);
        out
    }

    /// Vertices on the path from `v` up to its root, in order.
    pub fn path_vertices(&mut self, v: usize) -> Vec<usize> {
        let x = self.vertex_node[v];
        self.access(x);
        let mut out = Vec::new();
        self.collect_inorder(x, &mut out);
        out.reverse();
        out
    }

    fn collect_inorder(&mut self, x: usize, out: &mut Vec<usize>) {
        if x == NIL {
            return;
        }
        self.push(x);
        let [l, r] = self.nodes[x].ch;
        self.collect_inorder(l, out);
        if self.nodes[x].vertex != NIL {
            out.push(self.nodes[x].vertex);
        }
        self.collect_inorder(r, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_min_breaks_ties_by_edge_id() {
        let mut f: LinkCutForest<i64> = LinkCutForest::new(4);
        assert!(f.link(1, 0, 7, 5));
        assert!(f.link(2, 1, 3, 5));
        assert!(f.link(3, 2, 9, 8));
        assert_eq!(f.find_root(3), 0);
        assert_eq!(f.path_min(3), Some((5, 3)));
        assert_eq!(f.path_min(0), None);
    }

    #[test]
    fn cut_keeps_root_on_parent_side() {
        let mut f: LinkCutForest<i64> = LinkCutForest::new(5);
        f.link(1, 0, 0, 1);
        f.link(2, 1, 1, 1);
        f.link(3, 2, 2, 1);
        f.link(4, 1, 3, 1);
        f.cut(1);
        assert_eq!(f.find_root(4), 0);
        assert_eq!(f.find_root(3), 2);
        assert!(!f.connected(3, 0));
        assert!(!f.link(4, 0, 5, 1));
    }

    #[test]
    fn make_root_changes_path_direction() {
        let mut f: LinkCutForest<i64> = LinkCutForest::new(3);
        f.link(1, 0, 0, 4);
        f.link(2, 1, 1, 2);
        f.make_root(2);
        assert_eq!(f.find_root(0), 2);
        assert_eq!(f.path_min(0), Some((2, 1)));
        assert_eq!(f.path_vertices(0), vec![0, 1, 2]);
        assert_eq!(f.path_min_between(0, 1), Some((4, 0)));
        assert_eq!(f.find_root(0), 2);
    }
}
