use dyncut::graph::{AppliedUpdate, DynamicMultiGraph, EdgeHandle};
use dyncut::msf::DynamicMsf;
use dyncut::oracle::kruskal;
use dyncut::workload::{connected_erdos_renyi, random_update, UpdateMix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn kruskal_forest(g: &DynamicMultiGraph) -> Vec<EdgeHandle> {
    let handles: Vec<EdgeHandle> = g.edges().map(|(h, _)| h).collect();
    let list: Vec<(usize, usize, u32)> = g
        .edges()
        .map(|(h, r)| (r.u.index(), r.v.index(), h.0))
        .collect();
    kruskal(g.vertex_bound(), &list).into_iter().map(|i| handles[i]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn forest_matches_kruskal_after_every_update(seed in any::<u64>(), n in 2usize..20, p in 0.05f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = connected_erdos_renyi(n, p, 3, &mut rng);
        let mut msf = DynamicMsf::new(&g);
        prop_assert_eq!(msf.forest(), kruskal_forest(&g));
        let mix = UpdateMix { max_vertices: 3 * n, ..UpdateMix::default() };
        for _ in 0..120 {
            let u = random_update(&g, &mix, &mut rng);
            let before = msf.forest();
            let applied = g.apply(&u).unwrap();
            let rec = msf.apply(&g, &applied);
            if matches!(applied, AppliedUpdate::Split(_)) {
                let after = msf.forest();
                prop_assert!(before.iter().all(|h| after.contains(h)));
            }
            prop_assert!(rec.within_bounds(&applied), "{:?} after {:?}", rec, applied);
            prop_assert_eq!(msf.forest(), kruskal_forest(&g));
        }
    }
}
