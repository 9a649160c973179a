//! A collection of j-trees built by multiplicative weights, kept up to date
//! through updates, with its measured quality.

use dyncut::graph::GraphUpdate;
use dyncut::jtree::{collection_quality, JTreeCollection, MwuConfig};
use dyncut::report::to_f64;
use dyncut::workload::{connected_erdos_renyi, random_update, UpdateMix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut g = connected_erdos_renyi(24, 0.25, 3, &mut rng);
    // A small starting threshold makes the builder cut heavy tree edges.
    let cfg = MwuConfig { gamma_init: Some(0.2), max_iterations: 6 };
    let mut coll = JTreeCollection::build(&g, 4, &cfg, &mut rng);
    println!("{} instances, gamma {:.2}, {} escalations", coll.len(), coll.gamma, coll.escalations);
    println!("roots per instance {:?}", coll.instances.iter().map(|i| i.root_count()).collect::<Vec<_>>());
    println!("quality {:.2}", to_f64(collection_quality(&g, &coll.instances)));

    let mix = UpdateMix { max_cap: 3, max_vertices: 30, ..Default::default() };
    for _ in 0..20 {
        let u = random_update(&g, &mix, &mut rng);
        let split = matches!(u, GraphUpdate::Split { .. });
        let (_, logs) = coll.apply(&mut g, &u).unwrap();
        if split {
            println!("split: core changes per instance {:?}", logs.iter().map(Vec::len).collect::<Vec<_>>());
        }
    }
    println!("after updates: roots {:?}", coll.instances.iter().map(|i| i.root_count()).collect::<Vec<_>>());
    println!("quality {:.2}", to_f64(collection_quality(&g, &coll.instances)));
}
