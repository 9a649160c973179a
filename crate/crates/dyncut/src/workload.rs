//! Random graphs and update streams for tests, examples and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{cap, Capacity, DynamicMultiGraph, EdgeHandle, GraphUpdate, VertexId};

/// Erdős–Rényi graph with integer capacities drawn uniformly from `1..=max_cap`.
pub fn erdos_renyi(n: usize, p: f64, max_cap: i128, rng: &mut impl Rng) -> DynamicMultiGraph {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(p) {
                edges.push((u, v, random_cap(max_cap, rng)));
            }
        }
    }
    DynamicMultiGraph::from_edges(n, &edges).expect("valid endpoints")
}

/// Connected variant: a random spanning tree is added first.
pub fn connected_erdos_renyi(n: usize, p: f64, max_cap: i128, rng: &mut impl Rng) -> DynamicMultiGraph {
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((order[i], order[j], random_cap(max_cap, rng)));
    }
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(p) {
                edges.push((u, v, random_cap(max_cap, rng)));
            }
        }
    }
    DynamicMultiGraph::from_edges(n, &edges).expect("valid endpoints")
}

fn random_cap(max_cap: i128, rng: &mut impl Rng) -> Capacity {
    cap(rng.gen_range(1..=max_cap.max(1)))
}

#[derive(Clone, Copy, Debug)]
pub struct UpdateMix {
    pub insert: f64,
    pub delete: f64,
    pub split: f64,
    pub max_cap: i128,
    /// Splits are skipped once the graph has this many vertices.
    pub max_vertices: usize,
}

impl Default for UpdateMix {
    fn default() -> Self {
        UpdateMix { insert: 0.45, delete: 0.4, split: 0.15, max_cap: 1, max_vertices: usize::MAX }
    }
}

/// Draws one valid update for the current state of `g`.
pub fn random_update(g: &DynamicMultiGraph, mix: &UpdateMix, rng: &mut impl Rng) -> GraphUpdate {
    let total = mix.insert + mix.delete + mix.split;
    let mut x = rng.gen_range(0.0..total);
    if x >= mix.insert + mix.delete {
        if let Some(u) = random_split(g, mix, rng) {
            return u;
        }
        x = rng.gen_range(0.0..mix.insert + mix.delete);
    }
    if x >= mix.insert && g.edge_count() > 0 {
        let handles: Vec<EdgeHandle> = g.edges().map(|(h, _)| h).collect();
        return GraphUpdate::Delete { edge: *handles.choose(rng).expect("non-empty") };
    }
    random_insert(g, mix.max_cap, rng)
}

pub fn random_insert(g: &DynamicMultiGraph, max_cap: i128, rng: &mut impl Rng) -> GraphUpdate {
    let vs: Vec<VertexId> = g.vertices().collect();
    let u = *vs.choose(rng).expect("graph has vertices");
    let mut v = *vs.choose(rng).expect("graph has vertices");
    while v == u && vs.len() > 1 {
        v = *vs.choose(rng).expect("graph has vertices");
    }
    GraphUpdate::Insert { u, v, cap: random_cap(max_cap, rng) }
}

fn random_split(g: &DynamicMultiGraph, mix: &UpdateMix, rng: &mut impl Rng) -> Option<GraphUpdate> {
    if g.vertex_count() >= mix.max_vertices {
        return None;
    }
    let candidates: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) >= 2).collect();
    let vertex = *candidates.choose(rng)?;
    let inc = g.incident(vertex);
    let k = rng.gen_range(1..inc.len());
    let moved: Vec<EdgeHandle> = inc.choose_multiple(rng, k).copied().collect();
    Some(GraphUpdate::Split { vertex, moved })
}
