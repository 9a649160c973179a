use dyncut::graph::{cap, Capacity, DynamicMultiGraph, VertexId};
use dyncut::hierarchy::{Hierarchy, HierarchyConfig};
use dyncut::oracle::{self, max_flow, OracleGraph};
use dyncut::queries::{min_cut, multicut, multiway_cut, sparsest_cut, ForestCutTracker};
use dyncut::workload::{connected_erdos_renyi, random_update, UpdateMix};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn oracle_of(g: &DynamicMultiGraph) -> OracleGraph {
    let (_, edges) = g.to_edge_list();
    OracleGraph::new(g.vertex_bound(), &edges)
}

/// A hierarchy over a random connected graph after a few random updates.
fn setup(seed: u64, n: usize, levels: usize) -> (Hierarchy, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = connected_erdos_renyi(n, 0.45, 3, &mut rng);
    let cfg = HierarchyConfig { levels, j: 2, samples: 2, seed, ..Default::default() };
    let mut h = Hierarchy::new(&g, cfg).unwrap();
    let mix = UpdateMix { max_cap: 3, max_vertices: n + 2, ..Default::default() };
    for _ in 0..rng.gen_range(0..5) {
        let u = random_update(h.graph(), &mix, &mut rng);
        h.update(&u).unwrap();
    }
    (h, rng)
}

fn distinct(vs: &[VertexId], k: usize, rng: &mut ChaCha8Rng) -> Vec<VertexId> {
    vs.choose_multiple(rng, k).copied().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn min_cut_is_exact_on_every_chain(seed in any::<u64>(), n in 4usize..9, levels in 1usize..3) {
        let (mut h, mut rng) = setup(seed, n, levels);
        let vs: Vec<VertexId> = h.graph().vertices().collect();
        let st = distinct(&vs, 2, &mut rng);
        let (s, t) = (st[0], st[1]);
        let rep = min_cut(&mut h, s, t).unwrap();
        let (exact, _) = max_flow(&oracle_of(h.graph()), s.index(), t.index());
        for (leaf, v) in rep.per_chain.iter().enumerate() {
            let chain = h.chain(leaf);
            let (chain_exact, _) = max_flow(&OracleGraph::new(chain.n, &chain.edges()), s.index(), t.index());
            prop_assert_eq!(v.unwrap(), chain_exact);
            prop_assert!(chain_exact >= exact);
        }
        prop_assert_eq!(rep.witness[s.index()], 1 - rep.witness[t.index()]);
        prop_assert!(rep.witness_value >= exact);
        let chain = h.chain(rep.chain);
        let side: Vec<bool> = rep.witness.iter().map(|&l| l == 1).collect();
        prop_assert_eq!(chain.cut_value(&side), rep.value);
    }

    #[test]
    fn sparsest_witness_matches_its_chain_value(seed in any::<u64>(), n in 4usize..10, levels in 1usize..3) {
        let (h, _) = setup(seed, n, levels);
        let rep = sparsest_cut(&h).unwrap();
        let g = h.graph();
        let units: Vec<u64> = (0..g.vertex_bound()).map(|v| g.has_vertex(VertexId(v as u32)) as u64).collect();
        let (exact, _) = oracle::sparsest_cut(&oracle_of(g), &units).unwrap();
        prop_assert!(rep.witness_value >= exact);
        prop_assert!(rep.value >= exact);
        let chain = h.chain(rep.chain);
        let side: Vec<bool> = rep.witness.iter().map(|&l| l == 1).collect();
        let inside = g.vertices().filter(|v| side[v.index()]).count();
        let d = inside.min(g.vertex_count() - inside);
        prop_assert!(d > 0);
        prop_assert_eq!(chain.cut_value(&side) / Capacity::from_integer(d as i128), rep.value);
    }

    #[test]
    fn multiway_separates_terminals(seed in any::<u64>(), n in 4usize..10, k in 2usize..5, levels in 1usize..3) {
        let (h, mut rng) = setup(seed, n, levels);
        let vs: Vec<VertexId> = h.graph().vertices().collect();
        let ts = distinct(&vs, k.min(vs.len()), &mut rng);
        let rep = multiway_cut(&h, &ts).unwrap();
        for a in 0..ts.len() {
            for b in a + 1..ts.len() {
                prop_assert_ne!(rep.witness[ts[a].index()], rep.witness[ts[b].index()]);
            }
        }
        let og = oracle_of(h.graph());
        prop_assert_eq!(og.partition_cost(&rep.witness), rep.witness_value);
        if h.graph().vertex_bound() <= 10 {
            let idx: Vec<usize> = ts.iter().map(|t| t.index()).collect();
            let (exact, _) = oracle::multiway_cut(&og, &idx);
            prop_assert!(rep.witness_value >= exact);
            prop_assert!(rep.value >= exact);
        }
    }

    #[test]
    fn multicut_separates_pairs(seed in any::<u64>(), n in 4usize..10, pairs in 1usize..4, levels in 1usize..3) {
        let (h, mut rng) = setup(seed, n, levels);
        let vs: Vec<VertexId> = h.graph().vertices().collect();
        let ps: Vec<(VertexId, VertexId)> = (0..pairs).map(|_| { let p = distinct(&vs, 2, &mut rng); (p[0], p[1]) }).collect();
        let rep = multicut(&h, &ps).unwrap();
        for &(a, b) in &ps {
            prop_assert_ne!(rep.witness[a.index()], rep.witness[b.index()]);
        }
        let og = oracle_of(h.graph());
        prop_assert_eq!(og.partition_cost(&rep.witness), rep.witness_value);
        if h.graph().vertex_bound() <= 10 {
            let idx: Vec<(usize, usize)> = ps.iter().map(|p| (p.0.index(), p.1.index())).collect();
            let (exact, _) = oracle::multicut(&og, &idx);
            prop_assert!(rep.witness_value >= exact);
            prop_assert!(rep.value >= exact);
        }
    }

    #[test]
    fn tracker_minimum_survives_deletions(seed in any::<u64>(), n in 2usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Random tree: every vertex links to an earlier one.
        let edges: Vec<(usize, usize, Capacity)> = (1..n).map(|v| (rng.gen_range(0..v), v, cap(rng.gen_range(1..6)))).collect();
        let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(1..4)).collect();
        let mut t = ForestCutTracker::new(n, &edges, &[0], &weights);
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.shuffle(&mut rng);
        let mut alive = vec![true; edges.len()];
        prop_assert_eq!(t.min(), t.recompute_min());
        for i in order {
            t.delete(i);
            alive[i] = false;
            prop_assert_eq!(t.min(), t.recompute_min());
            for e in (0..edges.len()).filter(|&e| alive[e]) {
                let below: i64 = t.side(e).iter().map(|&v| weights[v] as i64).sum();
                prop_assert_eq!(t.below(e), below);
            }
        }
    }
}
