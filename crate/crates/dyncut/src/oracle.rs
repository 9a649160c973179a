//! Brute-force ground truth on small graphs.
//!
//! Everything here works on a dense capacity matrix built from a plain edge
//! list and deliberately avoids the dynamic structures of the rest of the
//! crate. Exponential routines refuse inputs above [`ENUM_BUDGET`] or
//! [`PARTITION_BUDGET`] vertices.

use std::collections::VecDeque;

use num_traits::Zero;

use crate::graph::Capacity;

/// Largest vertex count for 2^n cut enumeration.
pub const ENUM_BUDGET: usize = 14;
/// Largest vertex count for labelled-partition enumeration.
pub const PARTITION_BUDGET: usize = 12;

#[derive(Clone, Debug)]
pub struct OracleGraph {
    n: usize,
    matrix: Vec<Vec<Capacity>>,
    edges: Vec<(usize, usize, Capacity)>,
}

impl OracleGraph {
    pub fn new(n: usize, edges: &[(usize, usize, Capacity)]) -> Self {
        let mut matrix = vec![vec![Capacity::zero(); n]; n];
        for &(u, v, c) in edges {
            assert!(u < n && v < n && u != v, "bad oracle edge ({u}, {v})");
            matrix[u][v] += c;
            matrix[v][u] += c;
        }
        OracleGraph { n, matrix, edges: edges.to_vec() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, Capacity)] {
        &self.edges
    }

    pub fn weight(&self, u: usize, v: usize) -> Capacity {
        self.matrix[u][v]
    }

    /// Capacity crossing the cut given by membership flags.
    pub fn cut_value(&self, side: &[bool]) -> Capacity {
        let mut total = Capacity::zero();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if side[u] != side[v] {
                    total += self.matrix[u][v];
                }
            }
        }
        total
    }

    pub fn cut_value_mask(&self, mask: u64) -> Capacity {
        let side: Vec<bool> = (0..self.n).map(|i| mask >> i & 1 == 1).collect();
        self.cut_value(&side)
    }

    /// Cost of a labelling: capacity of edges whose endpoints get different labels.
    pub fn partition_cost(&self, labels: &[usize]) -> Capacity {
        let mut total = Capacity::zero();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if labels[u] != labels[v] {
                    total += self.matrix[u][v];
                }
            }
        }
        total
    }
}

/// Every nontrivial cut once, as a bitmask whose highest vertex is outside.
pub fn all_cuts(n: usize) -> impl Iterator<Item = u64> {
    assert!(n <= ENUM_BUDGET, "cut enumeration over budget: n = {n}");
    let limit = if n == 0 { 0 } else { 1u64 << (n - 1) };
    1..limit
}

/// Edmonds-Karp on the capacity matrix. Returns the flow value and the
/// source side of a minimum cut.
pub fn max_flow(g: &OracleGraph, s: usize, t: usize) -> (Capacity, Vec<bool>) {
    assert!(s != t);
    let n = g.n;
    let mut residual = g.matrix.clone();
    let mut value = Capacity::zero();
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            if x == t {
                break;
            }
            for y in 0..n {
                if prev[y] == usize::MAX && residual[x][y] > Capacity::zero() {
                    prev[y] = x;
                    q.push_back(y);
                }
            }
        }
        if prev[t] == usize::MAX {
            let side = prev.iter().map(|&p| p != usize::MAX).collect();
            return (value, side);
        }
        let mut bottleneck = None::<Capacity>;
        let mut y = t;
        while y != s {
            let x = prev[y];
            let r = residual[x][y];
            bottleneck = Some(bottleneck.map_or(r, |b| if r < b { r } else { b }));
            y = x;
        }
        let b = bottleneck.expect("path has an edge");
        let mut y = t;
        while y != s {
            let x = prev[y];
            residual[x][y] -= b;
            residual[y][x] += b;
            y = x;
        }
        value += b;
    }
}

/// Number of edge-disjoint paths between `a` and `b`, ignoring capacities.
pub fn edge_connectivity(n: usize, edges: &[(usize, usize)], a: usize, b: usize) -> u64 {
    let unit: Vec<(usize, usize, Capacity)> = edges.iter().map(|&(u, v)| (u, v, Capacity::from_integer(1))).collect();
    let (f, _) = max_flow(&OracleGraph::new(n, &unit), a, b);
    f.to_integer() as u64
}

/// Minimum over all cuts of capacity / min(w(S), w(V \ S)).
pub fn sparsest_cut(g: &OracleGraph, weights: &[u64]) -> Option<(Capacity, u64)> {
    let total: u64 = weights.iter().sum();
    let mut best: Option<(Capacity, u64)> = None;
    for mask in all_cuts(g.n) {
        let ws: u64 = (0..g.n).filter(|&i| mask >> i & 1 == 1).map(|i| weights[i]).sum();
        let denom = ws.min(total - ws);
        if denom == 0 {
            continue;
        }
        let psi = g.cut_value_mask(mask) / Capacity::from_integer(denom as i128);
        if best.as_ref().is_none_or(|(b, _)| psi < *b) {
            best = Some((psi, mask));
        }
    }
    best
}

/// Enumerates labellings of all vertices with `q` labels, with `fixed`
/// vertices pinned, and returns the cheapest one accepted by `ok`.
fn best_labelling(
    g: &OracleGraph,
    q: usize,
    fixed: &[(usize, usize)],
    ok: impl Fn(&[usize]) -> bool,
) -> Option<(Capacity, Vec<usize>)> {
    let n = g.n;
    let mut pinned = vec![None; n];
    for &(v, l) in fixed {
        pinned[v] = Some(l);
    }
    let free: Vec<usize> = (0..n).filter(|&v| pinned[v].is_none()).collect();
    let combos = (q as u128).checked_pow(free.len() as u32).expect("labelling count overflows");
    assert!(combos <= 1 << 24, "labelling enumeration over budget");
    let mut labels: Vec<usize> = pinned.iter().map(|p| p.unwrap_or(0)).collect();
    let mut best: Option<(Capacity, Vec<usize>)> = None;
    for code in 0..combos {
        let mut c = code;
        for &v in &free {
            labels[v] = (c % q as u128) as usize;
            c /= q as u128;
        }
        if !ok(&labels) {
            continue;
        }
        let cost = g.partition_cost(&labels);
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, labels.clone()));
        }
    }
    best
}

/// Exact minimum multiway cut separating every pair of `terminals`.
pub fn multiway_cut(g: &OracleGraph, terminals: &[usize]) -> (Capacity, Vec<usize>) {
    assert!(g.n <= PARTITION_BUDGET, "multiway enumeration over budget");
    let fixed: Vec<(usize, usize)> = terminals.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    best_labelling(g, terminals.len().max(1), &fixed, |_| true).expect("some labelling exists")
}

fn colourable(k: usize, nodes: &[usize], conflicts: &[(usize, usize)]) -> bool {
    let idx = |v: usize| nodes.iter().position(|&x| x == v).expect("listed");
    let mut adj = vec![Vec::new(); nodes.len()];
    for &(a, b) in conflicts {
        adj[idx(a)].push(idx(b));
        adj[idx(b)].push(idx(a));
    }
    fn go(i: usize, k: usize, adj: &[Vec<usize>], colour: &mut [usize]) -> bool {
        if i == adj.len() {
            return true;
        }
        for c in 0..k {
            if adj[i].iter().all(|&j| j >= i || colour[j] != c) {
                colour[i] = c;
                if go(i + 1, k, adj, colour) {
                    return true;
                }
            }
        }
        false
    }
    go(0, k, &adj, &mut vec![usize::MAX; nodes.len()])
}

/// Exact minimum multicut for `pairs`. Optimal solutions need no more labels
/// than the chromatic number of the pair graph, so only that many are tried.
pub fn multicut(g: &OracleGraph, pairs: &[(usize, usize)]) -> (Capacity, Vec<usize>) {
    assert!(g.n <= PARTITION_BUDGET, "multicut enumeration over budget");
    let mut nodes: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    nodes.sort();
    nodes.dedup();
    let q = (1..=nodes.len().max(1)).find(|&k| colourable(k, &nodes, pairs)).unwrap_or(1);
    best_labelling(g, q, &[], |labels| pairs.iter().all(|&(a, b)| labels[a] != labels[b])).expect("pairs are distinct vertices")
}

/// Kruskal under the given keys; returns indices of forest edges, sorted.
pub fn kruskal<K: Ord + Clone>(n: usize, edges: &[(usize, usize, K)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| edges[a].2.cmp(&edges[b].2).then(a.cmp(&b)));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nxt = p[y];
            p[y] = r;
            y = nxt;
        }
        r
    }
    let mut out = Vec::new();
    for i in order {
        let (a, b) = (find(&mut parent, edges[i].0), find(&mut parent, edges[i].1));
        if a != b {
            parent[a] = b;
            out.push(i);
        }
    }
    out.sort();
    out
}

fn tree_adjacency(n: usize, edges: &[(usize, usize)], tree: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); n];
    for &i in tree {
        let (u, v) = edges[i];
        adj[u].push((v, i));
        adj[v].push((u, i));
    }
    adj
}

fn reachable_without(adj: &[Vec<(usize, usize)>], start: usize, skip: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut q = VecDeque::from([start]);
    while let Some(x) = q.pop_front() {
        for &(y, i) in &adj[x] {
            if i != skip && !seen[y] {
                seen[y] = true;
                q.push_back(y);
            }
        }
    }
    seen
}

/// Tree-path length between the endpoints of every edge, divided by its length.
pub fn stretches(n: usize, edges: &[(usize, usize, f64)], tree: &[usize]) -> Vec<f64> {
    let plain: Vec<(usize, usize)> = edges.iter().map(|e| (e.0, e.1)).collect();
    let adj = tree_adjacency(n, &plain, tree);
    edges
        .iter()
        .map(|&(u, v, len)| {
            let mut dist = vec![f64::NAN; n];
            dist[u] = 0.0;
            let mut q = VecDeque::from([u]);
            while let Some(x) = q.pop_front() {
                for &(y, i) in &adj[x] {
                    if dist[y].is_nan() {
                        dist[y] = dist[x] + edges[i].2;
                        q.push_back(y);
                    }
                }
            }
            dist[v] / len
        })
        .collect()
}

/// For every tree edge, the capacity of graph edges crossing the cut obtained
/// by deleting it from the tree.
pub fn tree_capacities(n: usize, edges: &[(usize, usize, Capacity)], tree: &[usize]) -> Vec<(usize, Capacity)> {
    let plain: Vec<(usize, usize)> = edges.iter().map(|e| (e.0, e.1)).collect();
    let adj = tree_adjacency(n, &plain, tree);
    tree.iter()
        .map(|&t| {
            let side = reachable_without(&adj, edges[t].0, t);
            let total = edges
                .iter()
                .filter(|e| side[e.0] != side[e.1])
                .fold(Capacity::zero(), |acc, e| acc + e.2);
            (t, total)
        })
        .collect()
}

/// Contracts each forest component onto its unique root and returns the
/// projected inter-component edges as sorted `(min_root, max_root, cap)`.
pub fn contract(n: usize, edges: &[(usize, usize, Capacity)], forest: &[usize], roots: &[usize]) -> Vec<(usize, usize, Capacity)> {
    let plain: Vec<(usize, usize)> = edges.iter().map(|e| (e.0, e.1)).collect();
    let adj = tree_adjacency(n, &plain, forest);
    let mut owner = vec![usize::MAX; n];
    for &r in roots {
        let seen = reachable_without(&adj, r, usize::MAX);
        for v in 0..n {
            if seen[v] {
                assert!(owner[v] == usize::MAX, "component with two roots");
                owner[v] = r;
            }
        }
    }
    assert!(owner.iter().all(|&o| o != usize::MAX), "component without a root");
    let mut out: Vec<(usize, usize, Capacity)> = edges
        .iter()
        .filter(|e| owner[e.0] != owner[e.1])
        .map(|e| (owner[e.0].min(owner[e.1]), owner[e.0].max(owner[e.1]), e.2))
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: i128) -> Capacity {
        Capacity::from_integer(x)
    }

    #[test]
    fn max_flow_on_two_paths() {
        let g = OracleGraph::new(4, &[(0, 1, c(3)), (1, 3, c(2)), (0, 2, c(1)), (2, 3, c(5))]);
        let (f, side) = max_flow(&g, 0, 3);
        assert_eq!(f, c(3));
        assert_eq!(g.cut_value(&side), c(3));
    }

    #[test]
    fn sparsest_cut_of_two_triangles() {
        let e = [(0, 1, c(1)), (1, 2, c(1)), (0, 2, c(1)), (3, 4, c(1)), (4, 5, c(1)), (3, 5, c(1)), (2, 3, c(1))];
        let g = OracleGraph::new(6, &e);
        let (psi, mask) = sparsest_cut(&g, &[1; 6]).unwrap();
        assert_eq!(psi, Capacity::new(1, 3));
        assert!(mask == 0b000111 || mask == 0b111000);
    }

    #[test]
    fn multiway_and_multicut_on_star() {
        let g = OracleGraph::new(4, &[(0, 1, c(1)), (0, 2, c(2)), (0, 3, c(3))]);
        assert_eq!(multiway_cut(&g, &[1, 2, 3]).0, c(3));
        assert_eq!(multicut(&g, &[(1, 2)]).0, c(1));
        assert_eq!(multicut(&g, &[(1, 2), (2, 3)]).0, c(2));
    }

    #[test]
    fn kruskal_uses_keys_then_index() {
        let e = [(0, 1, 5), (1, 2, 1), (0, 2, 1)];
        assert_eq!(kruskal(3, &e), vec![1, 2]);
    }

    #[test]
    fn contraction_projects_cross_edges() {
        let e = [(0, 1, c(1)), (1, 2, c(2)), (2, 3, c(3)), (0, 3, c(4))];
        assert_eq!(contract(4, &e, &[0, 2], &[0, 3]), vec![(0, 3, c(2)), (0, 3, c(4))]);
    }

    #[test]
    fn tree_capacity_counts_crossing_edges() {
        let e = [(0, 1, c(1)), (1, 2, c(1)), (0, 2, c(5))];
        assert_eq!(tree_capacities(3, &e, &[0, 1]), vec![(0, c(6)), (1, c(6))]);
    }
}
