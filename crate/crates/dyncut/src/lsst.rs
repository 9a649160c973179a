//! Low-stretch spanning trees, tree-induced capacities and congestion.
//!
//! Graphs here are plain edge lists over vertex indices `0..n`; vertices with
//! no edges are isolated trees. Every builder returns a spanning forest as a
//! sorted list of edge indices.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use num_traits::ToPrimitive;
use rand::Rng;

use crate::graph::Capacity;

/// Builds a spanning forest given edge lengths and integer multiplicities
/// (an edge with multiplicity `k` counts as `k` parallel copies).
pub trait SpanningTreeBuilder {
    fn build(&self, n: usize, edges: &[(usize, usize)], lengths: &[f64], multiplicity: &[u64], rng: &mut dyn rand::RngCore) -> Vec<usize>;
}

/// Recursive ball-and-cone decomposition.
#[derive(Clone, Copy, Debug, Default)]
pub struct StarDecomposition;

/// Shortest-path tree from a random root per component. No stretch
/// guarantee; kept as a baseline.
#[derive(Clone, Copy, Debug, Default)]
pub struct ShortestPathTree;

#[derive(Clone, Copy, PartialEq)]
struct Dist(f64, usize);

impl Eq for Dist {}

impl Ord for Dist {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

impl PartialOrd for Dist {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl Ord for OrdF64 {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0)
    }
}

struct Adjacency {
    adj: Vec<Vec<(usize, usize)>>,
}

impl Adjacency {
    fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u != v {
                adj[u].push((v, i));
                adj[v].push((u, i));
            }
        }
        Adjacency { adj }
    }

    /// Dijkstra from `src` over vertices with `piece[x] == tag`. Returns the
    /// visit order with distances and parent edges.
    fn dijkstra(&self, src: usize, lengths: &[f64], piece: &[usize], tag: usize, dist: &mut [f64], via: &mut [usize]) -> Vec<usize> {
        self.reduced_dijkstra(src, lengths, None, piece, tag, dist, via)
    }

    /// As [`Self::dijkstra`], with each step `a -> b` shortened by
    /// `pot[b] - pot[a]`.
    #[allow(clippy::too_many_arguments)]
    fn reduced_dijkstra(&self, src: usize, lengths: &[f64], pot: Option<&[f64]>, piece: &[usize], tag: usize, dist: &mut [f64], via: &mut [usize]) -> Vec<usize> {
        let mut order = Vec::new();
        let mut heap = BinaryHeap::new();
        dist[src] = 0.0;
        via[src] = usize::MAX;
        heap.push(Dist(0.0, src));
        let mut done = vec![false; self.adj.len()];
        while let Some(Dist(d, x)) = heap.pop() {
            if d > dist[x] || done[x] {
                continue;
            }
            done[x] = true;
            order.push(x);
            for &(y, e) in &self.adj[x] {
                if piece[y] != tag {
                    continue;
                }
                let step = match pot {
                    Some(p) => (lengths[e] + p[x] - p[y]).max(0.0),
                    None => lengths[e],
                };
                let nd = d + step;
                if nd < dist[y] || (nd == dist[y] && e < via[y] && !done[y]) {
                    dist[y] = nd;
                    via[y] = e;
                    heap.push(Dist(nd, y));
                }
            }
        }
        order
    }
}

fn components(n: usize, adj: &Adjacency) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let x = comp[i];
            i += 1;
            for &(y, _) in &adj.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                }
            }
        }
        out.push(comp);
    }
    out
}

impl SpanningTreeBuilder for ShortestPathTree {
    fn build(&self, n: usize, edges: &[(usize, usize)], lengths: &[f64], _m: &[u64], rng: &mut dyn rand::RngCore) -> Vec<usize> {
        let adj = Adjacency::new(n, edges);
        let piece = vec![0usize; n];
        let mut dist = vec![f64::INFINITY; n];
        let mut via = vec![usize::MAX; n];
        let mut tree = Vec::new();
        for comp in components(n, &adj) {
            let root = comp[rng.gen_range(0..comp.len())];
            for x in adj.dijkstra(root, lengths, &piece, 0, &mut dist, &mut via) {
                if via[x] != usize::MAX {
                    tree.push(via[x]);
                }
            }
        }
        tree.sort();
        tree
    }
}

struct Decomposer<'a> {
    edges: &'a [(usize, usize)],
    lengths: &'a [f64],
    mult: &'a [u64],
    adj: Adjacency,
    piece: Vec<usize>,
    next_tag: usize,
    dist: Vec<f64>,
    /// Distances from the current piece's center.
    pot: Vec<f64>,
    via: Vec<usize>,
    tree: Vec<usize>,
}

impl Decomposer<'_> {
    fn weight(&self, e: usize) -> f64 {
        self.mult[e].max(1) as f64 / self.lengths[e]
    }

    /// Picks a radius in `[lo, hi]` among the visit distances minimising
    /// boundary weight over inside weight; returns how many of `order` fall
    /// inside.
    fn grow(&self, order: &[usize], tag: usize, lo: f64, hi: f64) -> usize {
        let mut inside = vec![false; self.piece.len()];
        let (mut cut, mut vol) = (0.0f64, 0.0f64);
        let mut best: Option<(f64, usize)> = None;
        let mut first_past = None;
        for (k, &x) in order.iter().enumerate() {
            inside[x] = true;
            for &(y, e) in &self.adj.adj[x] {
                if self.piece[y] != tag {
                    continue;
                }
                let w = self.weight(e);
                if inside[y] {
                    cut -= w;
                    vol += w;
                } else {
                    cut += w;
                }
            }
            let d = self.dist[x];
            if order.get(k + 1).is_some_and(|&y| self.dist[y] == d) {
                continue;
            }
            if d > hi {
                first_past.get_or_insert(k + 1);
                break;
            }
            if d >= lo {
                let score = cut.max(0.0) / (1.0 + vol);
                if best.is_none_or(|(s, _)| score < s) {
                    best = Some((score, k + 1));
                }
            }
        }
        best.map(|(_, k)| k).or(first_past).unwrap_or(order.len())
    }

    fn relabel(&mut self, members: &[usize]) -> usize {
        let t = self.next_tag;
        self.next_tag += 1;
        for &x in members {
            self.piece[x] = t;
        }
        t
    }

    fn decompose(&mut self, center: usize, tag: usize) {
        let mut stack = vec![(center, tag)];
        while let Some((center, tag)) = stack.pop() {
            let order = self.adj.dijkstra(center, self.lengths, &self.piece, tag, &mut self.dist, &mut self.via);
            if order.len() <= 2 {
                for &x in &order {
                    if self.via[x] != usize::MAX {
                        self.tree.push(self.via[x]);
                    }
                }
                for &x in &order {
                    self.dist[x] = f64::INFINITY;
                }
                continue;
            }
            let radius = self.dist[*order.last().expect("non-empty")];
            let k = self.grow(&order, tag, radius / 4.0, radius / 2.0).clamp(1, order.len() - 1);
            let ball: Vec<usize> = order[..k].to_vec();
            for &x in &order {
                self.pot[x] = self.dist[x];
                self.dist[x] = f64::INFINITY;
            }
            let ball_tag = self.relabel(&ball);
            stack.push((center, ball_tag));
            let mut assigned = ball;
            // Cones: each grows from a vertex next to the assigned region,
            // attached through the heaviest available bridge, and follows
            // directions that stay on shortest paths from the center.
            loop {
                let mut bridge: Option<(u64, Reverse<OrdF64>, Reverse<usize>, usize)> = None;
                for &x in &assigned {
                    for &(y, e) in &self.adj.adj[x] {
                        if self.piece[y] != tag {
                            continue;
                        }
                        let key = (self.mult[e].max(1), Reverse(OrdF64(self.pot[y])), Reverse(e), y);
                        if bridge.as_ref().is_none_or(|b| key > *b) {
                            bridge = Some(key);
                        }
                    }
                }
                let Some((_, _, Reverse(e), anchor)) = bridge else { break };
                self.tree.push(e);
                let pot = std::mem::take(&mut self.pot);
                let cone_order = self.adj.reduced_dijkstra(anchor, self.lengths, Some(&pot), &self.piece, tag, &mut self.dist, &mut self.via);
                self.pot = pot;
                let k = self.grow(&cone_order, tag, 0.0, radius / 4.0).clamp(1, cone_order.len());
                let cone: Vec<usize> = cone_order[..k].to_vec();
                for &x in &cone_order {
                    self.dist[x] = f64::INFINITY;
                }
                let cone_tag = self.relabel(&cone);
                stack.push((anchor, cone_tag));
                assigned.extend(cone);
            }
        }
    }
}

impl SpanningTreeBuilder for StarDecomposition {
    fn build(&self, n: usize, edges: &[(usize, usize)], lengths: &[f64], multiplicity: &[u64], rng: &mut dyn rand::RngCore) -> Vec<usize> {
        let adj = Adjacency::new(n, edges);
        let comps = components(n, &adj);
        let mut d = Decomposer {
            edges,
            lengths,
            mult: multiplicity,
            adj,
            piece: vec![0; n],
            next_tag: 1,
            dist: vec![f64::INFINITY; n],
            pot: vec![0.0; n],
            via: vec![usize::MAX; n],
            tree: Vec::new(),
        };
        for comp in comps {
            let center = comp[rng.gen_range(0..comp.len())];
            let tag = d.relabel(&comp);
            d.decompose(center, tag);
        }
        debug_assert!(d.tree.iter().all(|&e| e < d.edges.len()));
        d.tree.sort();
        d.tree
    }
}

/// Runs several builders and keeps the tree with the smallest
/// multiplicity-weighted total stretch; ties go to the earlier builder.
pub struct Cheapest(pub Vec<Box<dyn SpanningTreeBuilder + Send + Sync>>);

impl Default for Cheapest {
    fn default() -> Self {
        Cheapest(vec![Box::new(StarDecomposition), Box::new(ShortestPathTree)])
    }
}

impl SpanningTreeBuilder for Cheapest {
    fn build(&self, n: usize, edges: &[(usize, usize)], lengths: &[f64], multiplicity: &[u64], rng: &mut dyn rand::RngCore) -> Vec<usize> {
        let mut best: Option<(f64, Vec<usize>)> = None;
        for b in &self.0 {
            let t = b.build(n, edges, lengths, multiplicity, rng);
            let f = RootedForest::new(n, edges, &t, &[]);
            let cost: f64 = stretches(&f, edges, lengths).iter().zip(multiplicity).map(|(s, &m)| s * m as f64).sum();
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((cost, t));
            }
        }
        best.map(|(_, t)| t).unwrap_or_default()
    }
}

/// Multiplicities `⌈m·w(e)/‖w‖₁⌉`.
pub fn multiplicities(weights: &[f64]) -> Vec<u64> {
    let total: f64 = weights.iter().sum();
    let m = weights.len() as f64;
    weights.iter().map(|&w| if total > 0.0 { (m * w / total).ceil().max(1.0) as u64 } else { 1 }).collect()
}

pub fn lsst(builder: &dyn SpanningTreeBuilder, n: usize, edges: &[(usize, usize)], lengths: &[f64], rng: &mut dyn rand::RngCore) -> Vec<usize> {
    builder.build(n, edges, lengths, &vec![1; edges.len()], rng)
}

/// Tree for the graph in which every edge is duplicated in proportion to its
/// weight.
pub fn lsst_weighted(builder: &dyn SpanningTreeBuilder, n: usize, edges: &[(usize, usize)], lengths: &[f64], weights: &[f64], rng: &mut dyn rand::RngCore) -> Vec<usize> {
    builder.build(n, edges, lengths, &multiplicities(weights), rng)
}

/// A spanning forest with a chosen root per tree, parent pointers and
/// constant-time depth lookups plus logarithmic LCA.
#[derive(Clone, Debug)]
pub struct RootedForest {
    pub parent: Vec<usize>,
    pub parent_edge: Vec<usize>,
    pub depth: Vec<u32>,
    pub root_of: Vec<usize>,
    /// Vertices in BFS order, roots first.
    pub order: Vec<usize>,
    /// Euler-tour entry times, used to sort vertices along the tree.
    pub entry: Vec<u32>,
    up: Vec<Vec<usize>>,
}

pub const NONE: usize = usize::MAX;

impl RootedForest {
    /// `roots` lists preferred roots; a tree containing none of them is rooted
    /// at its smallest vertex.
    pub fn new(n: usize, edges: &[(usize, usize)], tree: &[usize], roots: &[usize]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &i in tree {
            let (u, v) = edges[i];
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        for a in &mut adj {
            a.sort();
        }
        let mut parent = vec![NONE; n];
        let mut parent_edge = vec![NONE; n];
        let mut depth = vec![0u32; n];
        let mut root_of = vec![NONE; n];
        let mut order = Vec::with_capacity(n);
        let starts = roots.iter().copied().chain(0..n);
        for r in starts {
            if root_of[r] != NONE {
                continue;
            }
            root_of[r] = r;
            let mut q = VecDeque::from([r]);
            while let Some(x) = q.pop_front() {
                order.push(x);
                for &(y, e) in &adj[x] {
                    if root_of[y] == NONE {
                        root_of[y] = r;
                        parent[y] = x;
                        parent_edge[y] = e;
                        depth[y] = depth[x] + 1;
                        q.push_back(y);
                    }
                }
            }
        }
        let levels = (usize::BITS - n.max(1).leading_zeros()) as usize + 1;
        let mut up = vec![parent.iter().enumerate().map(|(x, &p)| if p == NONE { x } else { p }).collect::<Vec<_>>()];
        for k in 1..levels {
            let prev = &up[k - 1];
            let next: Vec<usize> = (0..n).map(|x| prev[prev[x]]).collect();
            up.push(next);
        }
        // Entry times by an explicit DFS.
        let mut entry = vec![0u32; n];
        let mut t = 0u32;
        let mut children = vec![Vec::new(); n];
        for &x in &order {
            if parent[x] != NONE {
                children[parent[x]].push(x);
            }
        }
        for &r in order.iter().filter(|&&x| parent[x] == NONE) {
            let mut stack = vec![r];
            while let Some(x) = stack.pop() {
                entry[x] = t;
                t += 1;
                for &c in children[x].iter().rev() {
                    stack.push(c);
                }
            }
        }
        RootedForest { parent, parent_edge, depth, root_of, order, entry, up }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn lca(&self, a: usize, b: usize) -> Option<usize> {
        if self.root_of[a] != self.root_of[b] {
            return None;
        }
        let (mut a, mut b) = if self.depth[a] >= self.depth[b] { (a, b) } else { (b, a) };
        let diff = self.depth[a] - self.depth[b];
        for k in 0..self.up.len() {
            if diff >> k & 1 == 1 {
                a = self.up[k][a];
            }
        }
        if a == b {
            return Some(a);
        }
        for k in (0..self.up.len()).rev() {
            if self.up[k][a] != self.up[k][b] {
                a = self.up[k][a];
                b = self.up[k][b];
            }
        }
        Some(self.parent[a])
    }

    /// Tree edges on the path between `a` and `b`.
    pub fn path_edges(&self, a: usize, b: usize) -> Vec<usize> {
        let Some(l) = self.lca(a, b) else { return Vec::new() };
        let mut out = Vec::new();
        for mut x in [a, b] {
            while x != l {
                out.push(self.parent_edge[x]);
                x = self.parent[x];
            }
        }
        out
    }
}

/// Induced capacity of every tree edge: the total capacity of graph edges
/// whose tree path uses it. Non-tree entries hold the edge's own capacity.
pub fn tree_capacities(n: usize, edges: &[(usize, usize)], caps: &[Capacity], tree: &[usize]) -> Vec<Capacity> {
    let f = RootedForest::new(n, edges, tree, &[]);
    induced_capacities(&f, edges, caps)
}

pub fn induced_capacities(f: &RootedForest, edges: &[(usize, usize)], caps: &[Capacity]) -> Vec<Capacity> {
    let n = f.len();
    let mut acc = vec![Capacity::from_integer(0); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        let l = f.lca(u, v).expect("tree spans every edge");
        acc[u] += caps[i];
        acc[v] += caps[i];
        acc[l] -= caps[i] * Capacity::from_integer(2);
    }
    let mut out = caps.to_vec();
    for &x in f.order.iter().rev() {
        let p = f.parent[x];
        if p != NONE {
            let s = acc[x];
            acc[p] += s;
            out[f.parent_edge[x]] = s;
        }
    }
    out
}

/// Tree capacity over own capacity on tree edges; 1 elsewhere.
pub fn congestion(caps: &[Capacity], induced: &[Capacity], tree: &[usize]) -> Vec<f64> {
    let mut out = vec![1.0; caps.len()];
    for &e in tree {
        out[e] = (induced[e] / caps[e]).to_f64().expect("finite");
    }
    out
}

/// Tree distance between endpoints over edge length, for every edge.
pub fn stretches(f: &RootedForest, edges: &[(usize, usize)], lengths: &[f64]) -> Vec<f64> {
    let mut dist = vec![0.0f64; f.len()];
    for &x in &f.order {
        if f.parent[x] != NONE {
            dist[x] = dist[f.parent[x]] + lengths[f.parent_edge[x]];
        }
    }
    edges
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| {
            let l = f.lca(u, v).expect("tree spans every edge");
            (dist[u] + dist[v] - 2.0 * dist[l]) / lengths[i]
        })
        .collect()
}

pub fn average_stretch(n: usize, edges: &[(usize, usize)], lengths: &[f64], tree: &[usize]) -> f64 {
    if edges.is_empty() {
        return 1.0;
    }
    let f = RootedForest::new(n, edges, tree, &[]);
    stretches(&f, edges, lengths).iter().sum::<f64>() / edges.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cap;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tree_input_is_returned_whole() {
        let edges = [(0, 1), (1, 2), (1, 3), (3, 4)];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = lsst(&StarDecomposition, 5, &edges, &[1.0; 4], &mut rng);
        assert_eq!(t, vec![0, 1, 2, 3]);
        assert_eq!(average_stretch(5, &edges, &[1.0; 4], &t), 1.0);
    }

    #[test]
    fn unit_triangle_induced_capacities() {
        let edges = [(0, 1), (1, 2), (0, 2)];
        let caps = [cap(1), cap(1), cap(1)];
        let u = tree_capacities(3, &edges, &caps, &[0, 1]);
        assert_eq!(u, vec![cap(2), cap(2), cap(1)]);
        let c = congestion(&caps, &u, &[0, 1]);
        assert_eq!(c, vec![2.0, 2.0, 1.0]);
    }

    #[test]
    fn heavy_edge_is_kept_on_cycle() {
        let edges: Vec<(usize, usize)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        let mut w = vec![1.0; 8];
        w[5] = 1000.0;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = lsst_weighted(&StarDecomposition, 8, &edges, &[1.0; 8], &w, &mut rng);
        assert!(t.contains(&5));
        assert!(multiplicities(&w).iter().sum::<u64>() <= 16);
    }

    #[test]
    fn builders_span_disconnected_graphs() {
        let edges = [(0, 1), (1, 2), (2, 0), (3, 4), (5, 6), (6, 7), (7, 5), (5, 8)];
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for b in [&StarDecomposition as &dyn SpanningTreeBuilder, &ShortestPathTree] {
            let t = lsst(b, 10, &edges, &[1.0; 8], &mut rng);
            assert_eq!(t.len(), 6);
        }
    }
}
