//! Euler-tour forest on an implicit treap.
//!
//! Each vertex owns one node carrying an integer value; each tree edge owns
//! two arc nodes. A tour is a cyclic sequence stored linearly from its root,
//! so rerooting is a rotation and a cut splits out the segment between the two
//! arcs of the removed edge.

use std::collections::HashMap;

const NIL: usize = usize::MAX;

#[derive(Clone, Debug)]
struct Node {
    left: usize,
    right: usize,
    parent: usize,
    prio: u64,
    size: u32,
    vcnt: u32,
    val: i64,
    sum: i64,
    /// Vertex for vertex nodes, arc source otherwise.
    from: usize,
    is_vertex: bool,
}

#[derive(Clone, Debug)]
struct Arcs {
    fwd: usize,
    back: usize,
    a: usize,
    b: usize,
}

#[derive(Clone, Debug)]
pub struct EulerTourForest {
    nodes: Vec<Node>,
    free: Vec<usize>,
    edges: HashMap<u64, Arcs>,
    adj: Vec<Vec<u64>>,
    vnode: Vec<usize>,
    prio_state: u64,
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl EulerTourForest {
    pub fn new(n: usize) -> Self {
        let mut f = EulerTourForest { nodes: Vec::new(), free: Vec::new(), edges: HashMap::new(), adj: Vec::new(), vnode: Vec::new(), prio_state: 0x5eed };
        f.ensure_vertices(n);
        f
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn ensure_vertices(&mut self, n: usize) {
        while self.adj.len() < n {
            let v = self.adj.len();
            let prio = splitmix(&mut self.prio_state);
            self.nodes.push(Node { left: NIL, right: NIL, parent: NIL, prio, size: 1, vcnt: 1, val: 0, sum: 0, from: v, is_vertex: true });
            self.vnode.push(self.nodes.len() - 1);
            self.adj.push(Vec::new());
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        let v = self.adj.len();
        self.ensure_vertices(v + 1);
        v
    }

    fn alloc_arc(&mut self, from: usize) -> usize {
        let prio = splitmix(&mut self.prio_state);
        let node = Node { left: NIL, right: NIL, parent: NIL, prio, size: 1, vcnt: 0, val: 0, sum: 0, from, is_vertex: false };
        match self.free.pop() {
            Some(i) => {
                self.nodes[i] = node;
                i
            }
            None => {
                self.nodes.push(node);
                self.nodes.len() - 1
            }
        }
    }

    fn nsize(&self, x: usize) -> u32 {
        if x == NIL {
            0
        } else {
            self.nodes[x].size
        }
    }

    fn update(&mut self, x: usize) {
        let (l, r) = (self.nodes[x].left, self.nodes[x].right);
        let mut size = 1;
        let mut vcnt = u32::from(self.nodes[x].is_vertex);
        let mut sum = self.nodes[x].val;
        for c in [l, r] {
            if c != NIL {
                size += self.nodes[c].size;
                vcnt += self.nodes[c].vcnt;
                sum += self.nodes[c].sum;
            }
        }
        let n = &mut self.nodes[x];
        n.size = size;
        n.vcnt = vcnt;
        n.sum = sum;
    }

    fn merge(&mut self, a: usize, b: usize) -> usize {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.nodes[a].prio > self.nodes[b].prio {
            let r = self.nodes[a].right;
            let m = self.merge(r, b);
            self.nodes[a].right = m;
            self.nodes[m].parent = a;
            self.update(a);
            a
        } else {
            let l = self.nodes[b].left;
            let m = self.merge(a, l);
            self.nodes[b].left = m;
            self.nodes[m].parent = b;
            self.update(b);
            b
        }
    }

    fn merge_all(&mut self, parts: &[usize]) -> usize {
        let mut acc = NIL;
        for &p in parts {
            acc = self.merge(acc, p);
        }
        if acc != NIL {
            self.nodes[acc].parent = NIL;
        }
        acc
    }

    /// Splits off the first `k` nodes.
    fn split(&mut self, t: usize, k: u32) -> (usize, usize) {
        if t == NIL {
            return (NIL, NIL);
        }
        let l = self.nodes[t].left;
        let ls = self.nsize(l);
        if k <= ls {
            let (a, b) = self.split(l, k);
            self.nodes[t].left = b;
            if b != NIL {
                self.nodes[b].parent = t;
            }
            if a != NIL {
                self.nodes[a].parent = NIL;
            }
            self.update(t);
            (a, t)
        } else {
            let r = self.nodes[t].right;
            let (a, b) = self.split(r, k - ls - 1);
            self.nodes[t].right = a;
            if a != NIL {
                self.nodes[a].parent = t;
            }
            if b != NIL {
                self.nodes[b].parent = NIL;
            }
            self.update(t);
            (t, b)
        }
    }

    fn split_root(&mut self, t: usize, k: u32) -> (usize, usize) {
        let (a, b) = self.split(t, k);
        if a != NIL {
            self.nodes[a].parent = NIL;
        }
        if b != NIL {
            self.nodes[b].parent = NIL;
        }
        (a, b)
    }

    fn root_of(&self, mut x: usize) -> usize {
        while self.nodes[x].parent != NIL {
            x = self.nodes[x].parent;
        }
        x
    }

    fn index(&self, x: usize) -> u32 {
        let mut idx = self.nsize(self.nodes[x].left);
        let mut y = x;
        while self.nodes[y].parent != NIL {
            let p = self.nodes[y].parent;
            if self.nodes[p].right == y {
                idx += self.nsize(self.nodes[p].left) + 1;
            }
            y = p;
        }
        idx
    }

    /// Sum of values strictly before `x` in its tour.
    fn prefix(&self, x: usize) -> i64 {
        let l = self.nodes[x].left;
        let mut acc = if l == NIL { 0 } else { self.nodes[l].sum };
        let mut y = x;
        while self.nodes[y].parent != NIL {
            let p = self.nodes[y].parent;
            if self.nodes[p].right == y {
                let pl = self.nodes[p].left;
                acc += self.nodes[p].val + if pl == NIL { 0 } else { self.nodes[pl].sum };
            }
            y = p;
        }
        acc
    }

    fn prefix_vcnt(&self, x: usize) -> u32 {
        let l = self.nodes[x].left;
        let mut acc = if l == NIL { 0 } else { self.nodes[l].vcnt };
        let mut y = x;
        while self.nodes[y].parent != NIL {
            let p = self.nodes[y].parent;
            if self.nodes[p].right == y {
                let pl = self.nodes[p].left;
                acc += u32::from(self.nodes[p].is_vertex) + if pl == NIL { 0 } else { self.nodes[pl].vcnt };
            }
            y = p;
        }
        acc
    }

    fn first(&self, t: usize) -> usize {
        let mut x = t;
        while self.nodes[x].left != NIL {
            x = self.nodes[x].left;
        }
        x
    }

    pub fn connected(&self, a: usize, b: usize) -> bool {
        self.root_of(self.vnode[a]) == self.root_of(self.vnode[b])
    }

    /// Opaque identifier of the tree containing `v`, valid until the next
    /// structural change.
    pub fn tree_id(&self, v: usize) -> usize {
        self.root_of(self.vnode[v])
    }

    pub fn find_root(&self, v: usize) -> usize {
        let f = self.first(self.root_of(self.vnode[v]));
        self.nodes[f].from
    }

    pub fn make_root(&mut self, v: usize) {
        let x = self.vnode[v];
        let t = self.root_of(x);
        let i = self.index(x);
        if i == 0 {
            return;
        }
        let (a, b) = self.split_root(t, i);
        self.merge_all(&[b, a]);
    }

    pub fn has_edge(&self, id: u64) -> bool {
        self.edges.contains_key(&id)
    }

    pub fn edge_endpoints(&self, id: u64) -> Option<(usize, usize)> {
        self.edges.get(&id).map(|a| (a.a, a.b))
    }

    pub fn tree_edges(&self, v: usize) -> &[u64] {
        &self.adj[v]
    }

    /// Hangs `a`'s tree below `b`. Returns false if already connected or the
    /// id is taken.
    pub fn link(&mut self, a: usize, b: usize, id: u64) -> bool {
        if self.edges.contains_key(&id) || self.connected(a, b) {
            return false;
        }
        self.make_root(a);
        let ta = self.root_of(self.vnode[a]);
        let tb = self.root_of(self.vnode[b]);
        let i = self.index(self.vnode[b]);
        let (p, q) = self.split_root(tb, i + 1);
        let back = self.alloc_arc(b);
        let fwd = self.alloc_arc(a);
        self.merge_all(&[p, back, ta, fwd, q]);
        self.edges.insert(id, Arcs { fwd, back, a, b });
        self.adj[a].push(id);
        self.adj[b].push(id);
        true
    }

    pub fn cut(&mut self, id: u64) -> Option<(usize, usize)> {
        let arcs = self.edges.remove(&id)?;
        let (mut i, mut j) = (self.index(arcs.fwd), self.index(arcs.back));
        if i > j {
            std::mem::swap(&mut i, &mut j);
        }
        let t = self.root_of(arcs.fwd);
        let (a, rest) = self.split_root(t, i);
        let (_, rest) = self.split_root(rest, 1);
        let (mid, rest) = self.split_root(rest, j - i - 1);
        let (_, c) = self.split_root(rest, 1);
        self.merge_all(&[a, c]);
        if mid != NIL {
            self.nodes[mid].parent = NIL;
        }
        for x in [arcs.fwd, arcs.back] {
            self.nodes[x].left = NIL;
            self.nodes[x].right = NIL;
            self.nodes[x].parent = NIL;
            self.free.push(x);
        }
        self.adj[arcs.a].retain(|&e| e != id);
        self.adj[arcs.b].retain(|&e| e != id);
        Some((arcs.a, arcs.b))
    }

    pub fn value(&self, v: usize) -> i64 {
        self.nodes[self.vnode[v]].val
    }

    pub fn set_value(&mut self, v: usize, val: i64) {
        let mut x = self.vnode[v];
        self.nodes[x].val = val;
        while x != NIL {
            self.update(x);
            x = self.nodes[x].parent;
        }
    }

    pub fn add(&mut self, v: usize, delta: i64) {
        let cur = self.value(v);
        self.set_value(v, cur + delta);
    }

    pub fn component_sum(&self, v: usize) -> i64 {
        self.nodes[self.root_of(self.vnode[v])].sum
    }

    pub fn component_size(&self, v: usize) -> usize {
        self.nodes[self.root_of(self.vnode[v])].vcnt as usize
    }

    /// Between-arcs segment (sum, vertex count) for edge `id`, oriented so the
    /// segment is the side containing `toward`.
    fn side(&self, id: u64, toward: usize) -> Option<(i64, usize)> {
        let arcs = self.edges.get(&id)?;
        let (into, out) = if arcs.b == toward { (arcs.fwd, arcs.back) } else { (arcs.back, arcs.fwd) };
        // `into` is the arc entering `toward`'s side.
        let (i, j) = (self.index(into), self.index(out));
        let (lo, hi) = if i < j { (into, out) } else { (out, into) };
        let seg_sum = self.prefix(hi) - self.prefix(lo) - self.nodes[lo].val;
        let seg_cnt = (self.prefix_vcnt(hi) - self.prefix_vcnt(lo)) as usize;
        if i < j {
            Some((seg_sum, seg_cnt))
        } else {
            let root = self.root_of(into);
            Some((self.nodes[root].sum - seg_sum, self.nodes[root].vcnt as usize - seg_cnt))
        }
    }

    /// Sum over the side of tree edge `id` that contains endpoint `toward`.
    pub fn side_sum(&self, id: u64, toward: usize) -> Option<i64> {
        self.side(id, toward).map(|s| s.0)
    }

    pub fn side_size(&self, id: u64, toward: usize) -> Option<usize> {
        self.side(id, toward).map(|s| s.1)
    }

    fn parent_edge(&self, v: usize) -> Option<u64> {
        let pv = self.index(self.vnode[v]);
        self.adj[v].iter().copied().find(|id| {
            let arcs = &self.edges[id];
            let (into, out) = if arcs.b == v { (arcs.fwd, arcs.back) } else { (arcs.back, arcs.fwd) };
            // The arc into v from its parent precedes v's own node, the arc
            // back out follows it.
            self.index(into) < pv && pv < self.index(out)
        })
    }

    /// Sum over the subtree of `v` under the current rooting.
    pub fn sum(&self, v: usize) -> i64 {
        match self.parent_edge(v) {
            None => self.component_sum(v),
            Some(id) => self.side_sum(id, v).expect("edge present"),
        }
    }

    /// Vertex count of the subtree of `v` under the current rooting.
    pub fn size(&self, v: usize) -> usize {
        match self.parent_edge(v) {
            None => self.component_size(v),
            Some(id) => self.side_size(id, v).expect("edge present"),
        }
    }

    /// All vertices in the tree of `v`.
    pub fn component_vertices(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![self.root_of(self.vnode[v])];
        while let Some(x) = stack.pop() {
            let n = &self.nodes[x];
            if n.is_vertex {
                out.push(n.from);
            }
            if n.left != NIL {
                stack.push(n.left);
            }
            if n.right != NIL {
                stack.push(n.right);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> EulerTourForest {
        let mut f = EulerTourForest::new(n);
        for v in 1..n {
            assert!(f.link(v, v - 1, v as u64));
        }
        f
    }

    #[test]
    fn roots_follow_make_root() {
        let mut f = path(5);
        assert_eq!(f.find_root(4), 0);
        f.make_root(3);
        assert_eq!(f.find_root(0), 3);
        assert_eq!(f.size(3), 5);
        assert_eq!(f.size(1), 2);
        assert_eq!(f.size(4), 1);
    }

    #[test]
    fn cut_splits_tour() {
        let mut f = path(6);
        for v in 0..6 {
            f.set_value(v, 1 << v);
        }
        f.cut(3);
        assert!(!f.connected(2, 3));
        assert_eq!(f.component_sum(0), 0b111);
        assert_eq!(f.component_sum(5), 0b111000);
        assert_eq!(f.find_root(5), 3);
        assert_eq!(f.sum(4), 0b110000);
        let mut vs = f.component_vertices(4);
        vs.sort();
        assert_eq!(vs, vec![3, 4, 5]);
    }

    #[test]
    fn side_sum_is_root_independent() {
        let mut f = EulerTourForest::new(5);
        f.link(1, 0, 10);
        f.link(2, 1, 11);
        f.link(3, 1, 12);
        f.link(4, 3, 13);
        for v in 0..5 {
            f.set_value(v, 1);
        }
        f.add(4, 9);
        assert_eq!(f.side_sum(12, 3), Some(11));
        assert_eq!(f.side_sum(12, 1), Some(3));
        f.make_root(4);
        assert_eq!(f.side_sum(12, 3), Some(11));
        assert_eq!(f.side_sum(12, 1), Some(3));
        assert_eq!(f.sum(1), 3);
        assert_eq!(f.sum(4), 14);
    }

    #[test]
    fn vertices_can_be_added_after_links() {
        let mut f = path(3);
        let v = f.add_vertex();
        assert_eq!(v, 3);
        assert!(f.link(v, 0, 99));
        assert_eq!(f.component_size(2), 4);
        f.cut(99);
        assert_eq!(f.component_size(v), 1);
    }
}
