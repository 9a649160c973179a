//! Multiplicative-weights construction of a tree collection in which every
//! edge, averaged over the trees, is congested only a little outside a small
//! per-tree set of heavy tree edges.

use rand::RngCore;

use crate::graph::Capacity;
use crate::lsst::{average_stretch, congestion, induced_capacities, lsst, lsst_weighted, Cheapest, RootedForest, SpanningTreeBuilder};

#[derive(Clone, Debug)]
pub struct MwuConfig {
    /// Starting congestion threshold factor; measured from a first tree when absent.
    pub gamma_init: Option<f64>,
    /// Upper limit on the number of trees.
    pub max_iterations: usize,
}

impl Default for MwuConfig {
    fn default() -> Self {
        MwuConfig { gamma_init: None, max_iterations: 32 }
    }
}

/// One tree of the collection together with its heavy set.
#[derive(Clone, Debug)]
pub struct MwuTree {
    /// Indices of tree edges, sorted.
    pub tree: Vec<usize>,
    /// Tree edges whose congestion reached the threshold, sorted.
    pub heavy: Vec<usize>,
    /// Induced tree capacity for tree edges, own capacity elsewhere.
    pub induced: Vec<Capacity>,
    pub congestion: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct MwuOutcome {
    pub trees: Vec<MwuTree>,
    /// Threshold factor after all escalations.
    pub gamma: f64,
    pub escalations: u32,
    /// Iteration count the formula asked for, before clamping.
    pub requested_iterations: f64,
}

impl MwuOutcome {
    /// Per edge, the average over trees of its congestion in trees where it
    /// is not heavy.
    pub fn light_congestion(&self, m: usize) -> Vec<f64> {
        let mut acc = vec![0.0; m];
        for t in &self.trees {
            let mut heavy = vec![false; m];
            for &e in &t.heavy {
                heavy[e] = true;
            }
            for e in 0..m {
                if !heavy[e] {
                    acc[e] += t.congestion[e];
                }
            }
        }
        let k = self.trees.len().max(1) as f64;
        acc.iter().map(|a| a / k).collect()
    }
}

/// Builds the collection with the default tree builder.
pub fn mwu_build(n: usize, edges: &[(usize, usize)], caps: &[Capacity], j: usize, cfg: &MwuConfig, rng: &mut dyn RngCore) -> MwuOutcome {
    mwu_build_with(&Cheapest::default(), n, edges, caps, j, cfg, rng)
}

pub fn mwu_build_with(
    builder: &dyn SpanningTreeBuilder,
    n: usize,
    edges: &[(usize, usize)],
    caps: &[Capacity],
    j: usize,
    cfg: &MwuConfig,
    rng: &mut dyn RngCore,
) -> MwuOutcome {
    assert_eq!(edges.len(), caps.len());
    let m = edges.len();
    let j = j.max(1);
    let capf: Vec<f64> = caps.iter().map(|c| to_f64(*c)).collect();
    let mut gamma = match cfg.gamma_init {
        Some(g) => g,
        None => {
            let lengths: Vec<f64> = capf.iter().map(|c| 1.0 / c).collect();
            let t = lsst(builder, n, edges, &lengths, rng);
            let stretch = average_stretch(n, edges, &lengths, &t);
            4.0 * (n.max(2) as f64).ln() * (1.0 + stretch)
        }
    };
    let requested = 10.0 * gamma * m as f64 / j as f64;
    let k = (requested.ceil() as usize).clamp(3, cfg.max_iterations.max(3));

    // Exponents of the weights; weights are exp((score - max) / k).
    let mut score = vec![0.0f64; m];
    let mut trees = Vec::with_capacity(k);
    let mut escalations = 0;
    while trees.len() < k {
        let top = score.iter().copied().fold(0.0f64, f64::max);
        let w: Vec<f64> = score.iter().map(|s| ((s - top) / k as f64).exp()).collect();
        let norm: f64 = w.iter().sum();
        let lengths: Vec<f64> = (0..m).map(|e| (w[e] + norm / m as f64) / capf[e]).collect();
        let tree = lsst_weighted(builder, n, edges, &lengths, &w, rng);
        let forest = RootedForest::new(n, edges, &tree, &[]);
        let induced = induced_capacities(&forest, edges, caps);
        let cong = congestion(caps, &induced, &tree);
        let threshold = gamma * m as f64 / j as f64;
        let heavy: Vec<usize> = tree.iter().copied().filter(|&e| cong[e] >= threshold).collect();
        if heavy.len() > j {
            gamma *= 2.0;
            escalations += 1;
            continue;
        }
        let mut is_heavy = vec![false; m];
        for &e in &heavy {
            is_heavy[e] = true;
        }
        for e in 0..m {
            if !is_heavy[e] {
                score[e] += cong[e];
            }
        }
        trees.push(MwuTree { tree, heavy, induced, congestion: cong });
    }
    MwuOutcome { trees, gamma, escalations, requested_iterations: requested }
}

fn to_f64(c: Capacity) -> f64 {
    *c.numer() as f64 / *c.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cap;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tree_input_has_no_heavy_edges_and_unit_congestion() {
        let edges = [(0, 1), (1, 2), (2, 3), (1, 4)];
        let caps = vec![cap(1); 4];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let out = mwu_build(5, &edges, &caps, 2, &MwuConfig::default(), &mut rng);
        assert!(out.trees.len() >= 3);
        for t in &out.trees {
            assert_eq!(t.tree, vec![0, 1, 2, 3]);
            assert!(t.heavy.is_empty());
        }
        assert!(out.light_congestion(4).iter().all(|&c| (c - 1.0).abs() < 1e-12));
    }

    #[test]
    fn heavy_sets_respect_the_size_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = crate::workload::connected_erdos_renyi(30, 0.2, 3, &mut rng);
        let (_, list) = g.to_edge_list();
        let edges: Vec<(usize, usize)> = list.iter().map(|e| (e.0, e.1)).collect();
        let caps: Vec<Capacity> = list.iter().map(|e| e.2).collect();
        let cfg = MwuConfig { gamma_init: Some(0.01), max_iterations: 8 };
        let out = mwu_build(30, &edges, &caps, 4, &cfg, &mut rng);
        assert!(out.escalations > 0);
        assert_eq!(out.trees.len(), (out.requested_iterations.ceil() as usize).clamp(3, 8));
        for t in &out.trees {
            assert!(t.heavy.len() <= 4);
            assert_eq!(t.tree.len(), 29);
        }
    }
}
