//! A dynamic cut sparsifier on a dense random graph: output size, recourse
//! and how well a few cuts are preserved.

use dyncut::oracle::OracleGraph;
use dyncut::report::to_f64;
use dyncut::sparsifier::{CutSparsifier, SparsifierConfig};
use dyncut::workload::{connected_erdos_renyi, random_update, UpdateMix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 40;
    let g = connected_erdos_renyi(n, 0.9, 1, &mut rng);
    let cfg = SparsifierConfig { epsilon: 0.5, bundle_depth: Some(4), levels: Some(3), seed: 1, ..Default::default() };
    let mut sp = CutSparsifier::new(&g, cfg).unwrap();
    println!("input {} edges, sparsifier {} edges", g.edge_count(), sp.edge_count());

    let mix = UpdateMix { max_vertices: n + 5, ..Default::default() };
    let mut recourse = 0;
    for _ in 0..50 {
        let u = random_update(sp.graph(), &mix, &mut rng);
        let (_, rec) = sp.update(&u).unwrap();
        recourse += rec.inserted + rec.deleted;
    }
    println!("after 50 updates: {} edges, {recourse} edge changes", sp.edge_count());

    let n = sp.graph().vertex_bound();
    let (_, ge) = sp.graph().to_edge_list();
    let og = OracleGraph::new(n, &ge);
    let he: Vec<_> = sp.edges().iter().map(|e| (e.1.index(), e.2.index(), e.3)).collect();
    let oh = OracleGraph::new(n, &he);
    for _ in 0..5 {
        let side: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let (a, b) = (og.cut_value(&side), oh.cut_value(&side));
        println!("cut: input {:>6.1}  sparsifier {:>6.1}  ratio {:.3}", to_f64(a), to_f64(b), to_f64(b / a));
    }
}
