//! Peeled spanning-forest bundles: every edge left outside a depth-`l` bundle
//! has at least `l` edge-disjoint paths between its endpoints.

use dyncut::bundle::SpanningForestBundle;
use dyncut::oracle::edge_connectivity;
use dyncut::workload::connected_erdos_renyi;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let g = connected_erdos_renyi(10, 0.7, 1, &mut rng);
    let depth = 3;
    let b = SpanningForestBundle::from_graph(&g, depth);
    for (i, f) in b.forests().iter().enumerate() {
        println!("forest {}: {} edges", i + 1, f.len());
    }
    let plain: Vec<(usize, usize)> = g.edges().map(|(_, r)| (r.u.index(), r.v.index())).collect();
    for h in b.non_bundle_edges() {
        let (u, v) = g.endpoints(h).unwrap();
        let k = edge_connectivity(g.vertex_bound(), &plain, u.index(), v.index());
        println!("{h:?} ({}, {}) outside the bundle, connectivity {k}", u.0, v.0);
        assert!(k >= depth as u64);
    }
}
