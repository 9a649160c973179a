//! A two-level j-tree hierarchy under a random update stream: per-level
//! recourse, core sizes and rebuilds.

use dyncut::hierarchy::{Hierarchy, HierarchyConfig};
use dyncut::workload::{connected_erdos_renyi, random_update, UpdateMix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let g = connected_erdos_renyi(48, 0.15, 4, &mut rng);
    let cfg = HierarchyConfig { levels: 2, j: 6, samples: 2, seed: 8, ..Default::default() };
    let mut h = Hierarchy::new(&g, cfg).unwrap();
    println!("level sizes {:?}, chains {}", h.level_sizes(), h.leaf_count());

    let mix = UpdateMix { max_cap: 4, max_vertices: 60, ..Default::default() };
    for step in 0..30 {
        let u = random_update(h.graph(), &mix, &mut rng);
        let (_, rep) = h.update(&u).unwrap();
        if step % 5 == 0 || rep.rebuilt.is_some() {
            println!("{step:>2} recourse {:?} cores {:?} rebuilt {:?}", rep.recourse, rep.core_sizes, rep.rebuilt);
        }
    }
    h.validate().unwrap();
    let c = h.chain(0);
    println!("chain 0: {} forest edges, {} core edges on {} roots", c.forest.len(), c.core.len(), c.roots.len());
    println!("rebuilds per level {:?}", h.rebuilds());
}
