//! Minimum spanning forest under insertions, deletions and vertex splits,
//! with the per-update recourse the structure reports.

use dyncut::graph::GraphUpdate;
use dyncut::msf::DynamicMsf;
use dyncut::workload::{connected_erdos_renyi, random_update, UpdateMix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut g = connected_erdos_renyi(12, 0.3, 1, &mut rng);
    let mut msf = DynamicMsf::new(&g);
    println!("start: {} edges, forest of {}", g.edge_count(), msf.forest().len());

    let mix = UpdateMix { max_vertices: 16, ..Default::default() };
    for step in 0..12 {
        let u = random_update(&g, &mix, &mut rng);
        let label = match &u {
            GraphUpdate::Insert { .. } => "insert",
            GraphUpdate::Delete { .. } => "delete",
            GraphUpdate::Split { .. } => "split",
        };
        let applied = g.apply(&u).unwrap();
        let rec = msf.apply(&g, &applied);
        println!("{step:>2} {label:<6} forest={:<2} {:?}", msf.forest().len(), rec);
    }
}
