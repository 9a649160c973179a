//! Exact maximum flow by blocking flows on a level graph.

use std::collections::VecDeque;

use num_traits::Zero;

use crate::graph::Capacity;

struct Arc {
    to: usize,
    rev: usize,
    cap: Capacity,
}

pub struct FlowNetwork {
    adj: Vec<Vec<Arc>>,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork { adj: (0..n).map(|_| Vec::new()).collect() }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, Capacity)]) -> Self {
        let mut f = FlowNetwork::new(n);
        for &(u, v, c) in edges {
            f.add_undirected(u, v, c);
        }
        f
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// An undirected edge is a pair of arcs that are each other's residual.
    pub fn add_undirected(&mut self, u: usize, v: usize, c: Capacity) {
        if u == v {
            return;
        }
        let (ru, rv) = (self.adj[v].len(), self.adj[u].len());
        self.adj[u].push(Arc { to: v, rev: ru, cap: c });
        self.adj[v].push(Arc { to: u, rev: rv, cap: c });
    }

    fn levels(&self, s: usize) -> Vec<u32> {
        let mut level = vec![u32::MAX; self.adj.len()];
        level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for a in &self.adj[x] {
                if a.cap > Capacity::zero() && level[a.to] == u32::MAX {
                    level[a.to] = level[x] + 1;
                    q.push_back(a.to);
                }
            }
        }
        level
    }

    /// One augmenting path in the level graph, found iteratively.
    fn augment(&mut self, s: usize, t: usize, level: &[u32], next: &mut [usize]) -> Capacity {
        let mut path: Vec<(usize, usize)> = Vec::new();
        let mut x = s;
        loop {
            if x == t {
                let push = path.iter().map(|&(u, i)| self.adj[u][i].cap).min().expect("path reaches t");
                for &(u, i) in &path {
                    self.adj[u][i].cap -= push;
                    let (to, rev) = (self.adj[u][i].to, self.adj[u][i].rev);
                    self.adj[to][rev].cap += push;
                }
                return push;
            }
            let mut advanced = false;
            while next[x] < self.adj[x].len() {
                let a = &self.adj[x][next[x]];
                if a.cap > Capacity::zero() && level[a.to] == level[x] + 1 {
                    path.push((x, next[x]));
                    x = a.to;
                    advanced = true;
                    break;
                }
                next[x] += 1;
            }
            if !advanced {
                // Dead end: retreat and skip the arc that led here.
                match path.pop() {
                    Some((u, _)) => {
                        next[u] += 1;
                        x = u;
                    }
                    None => return Capacity::zero(),
                }
            }
        }
    }

    /// Maximum flow value and the source side of a minimum cut.
    pub fn max_flow(&mut self, s: usize, t: usize) -> (Capacity, Vec<bool>) {
        let mut total = Capacity::zero();
        if s == t {
            return (total, vec![false; self.adj.len()]);
        }
        loop {
            let level = self.levels(s);
            if level[t] == u32::MAX {
                return (total, level.iter().map(|&l| l != u32::MAX).collect());
            }
            let mut next = vec![0usize; self.adj.len()];
            loop {
                let f = self.augment(s, t, &level, &mut next);
                if f.is_zero() {
                    break;
                }
                total += f;
            }
        }
    }
}

/// Exact minimum `s`-`t` cut of an undirected capacitated edge list.
pub fn min_st_cut(n: usize, edges: &[(usize, usize, Capacity)], s: usize, t: usize) -> (Capacity, Vec<bool>) {
    FlowNetwork::from_edges(n, edges).max_flow(s, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cap;

    #[test]
    fn parallel_paths_and_bottleneck() {
        let edges = [(0, 1, cap(3)), (1, 3, cap(2)), (0, 2, cap(1)), (2, 3, cap(5)), (1, 2, cap(1))];
        let (f, side) = min_st_cut(4, &edges, 0, 3);
        assert_eq!(f, cap(4));
        let cut: Capacity = edges.iter().filter(|e| side[e.0] != side[e.1]).map(|e| e.2).sum();
        assert_eq!(cut, f);
    }

    #[test]
    fn disconnected_pair_has_zero_flow() {
        let (f, side) = min_st_cut(4, &[(0, 1, cap(1)), (2, 3, cap(1))], 0, 3);
        assert!(f.is_zero());
        assert!(side[0] && side[1] && !side[3]);
    }
}
