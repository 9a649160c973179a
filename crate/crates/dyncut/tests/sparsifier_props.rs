use std::collections::BTreeMap;

use dyncut::graph::{Capacity, VertexId};
use dyncut::sparsifier::{CutSparsifier, SparseChange, SparseKey, SparsifierConfig};
use dyncut::workload::{connected_erdos_renyi, random_update, UpdateMix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Mirror = BTreeMap<SparseKey, (VertexId, VertexId, Capacity)>;

fn replay(mirror: &mut Mirror, changes: &[SparseChange]) {
    for c in changes {
        match c {
            SparseChange::Split { vertex, new_vertex, moved } => {
                for k in moved {
                    let e = mirror.get_mut(k).expect("moved key is published");
                    if e.0 == *vertex {
                        e.0 = *new_vertex;
                    } else {
                        assert_eq!(e.1, *vertex);
                        e.1 = *new_vertex;
                    }
                }
            }
            SparseChange::Deleted { key, .. } => {
                mirror.remove(key).expect("deleted key was published");
            }
            SparseChange::Recapacitated { key, old, new, .. } => {
                let e = mirror.get_mut(key).expect("recapacitated key is published");
                assert_eq!(e.2, *old);
                e.2 = *new;
            }
            SparseChange::Inserted { key, u, v, cap } => {
                assert!(mirror.insert(*key, (*u, *v, *cap)).is_none());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn updates_keep_contracts_and_change_stream(seed in any::<u64>(), n in 3usize..14, depth in 1usize..3, max_cap in 1i128..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = connected_erdos_renyi(n, 0.5, max_cap, &mut rng);
        let cfg = SparsifierConfig { bundle_depth: Some(depth), seed, ..Default::default() };
        let mut s = CutSparsifier::new(&g, cfg).unwrap();
        let mut mirror: Mirror = s.edges().into_iter().map(|(k, u, v, c)| (k, (u, v, c))).collect();
        let mix = UpdateMix { max_cap, max_vertices: 2 * n, ..UpdateMix::default() };
        for _ in 0..60 {
            let u = random_update(s.graph(), &mix, &mut rng);
            let (applied, r) = s.update(&u).unwrap();
            prop_assert!(r.within_bounds(&applied, s.level_count(), s.bundle_depth()), "{:?} after {:?}", r.per_class, applied);
            replay(&mut mirror, &r.changes);
            let now: Mirror = s.edges().into_iter().map(|(k, u, v, c)| (k, (u, v, c))).collect();
            prop_assert_eq!(&mirror, &now);
            for (k, (u, v, _)) in &now {
                prop_assert_eq!(s.graph().endpoints(k.edge), Some((*u, *v)));
            }
            prop_assert!(s.coin_ledger_consistent());
            prop_assert!(s.class_decomposition_exact());
            prop_assert!(s.capacity_ratio_ok());
            prop_assert!(s.edge_count() <= s.edge_budget());
        }
    }
}
