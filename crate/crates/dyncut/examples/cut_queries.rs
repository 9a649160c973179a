//! Minimum s-t cut, sparsest cut, multiway cut and multicut answered on a
//! hierarchy and compared with brute force.

use dyncut::graph::VertexId;
use dyncut::hierarchy::{Hierarchy, HierarchyConfig};
use dyncut::oracle::{self, OracleGraph};
use dyncut::queries::{min_cut, multicut, multiway_cut, sparsest_cut, QueryReport};
use dyncut::workload::connected_erdos_renyi;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn show(name: &str, r: &QueryReport, exact: impl std::fmt::Display) {
    println!("{name:<10} chain value {:>6}  witness {:>6}  optimum {exact}", r.value.to_string(), r.witness_value.to_string());
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let g = connected_erdos_renyi(11, 0.35, 3, &mut rng);
    let mut h = Hierarchy::new(&g, HierarchyConfig { levels: 1, j: 4, samples: 3, seed: 21, ..Default::default() }).unwrap();
    let (_, edges) = g.to_edge_list();
    let og = OracleGraph::new(g.vertex_bound(), &edges);

    let (s, t) = (VertexId(0), VertexId(7));
    show("s-t", &min_cut(&mut h, s, t).unwrap(), oracle::max_flow(&og, 0, 7).0);
    show("sparsest", &sparsest_cut(&h).unwrap(), oracle::sparsest_cut(&og, &[1; 11]).unwrap().0);

    let ts = [VertexId(1), VertexId(5), VertexId(9)];
    show("multiway", &multiway_cut(&h, &ts).unwrap(), oracle::multiway_cut(&og, &[1, 5, 9]).0);

    let pairs = [(VertexId(0), VertexId(10)), (VertexId(3), VertexId(6))];
    show("multicut", &multicut(&h, &pairs).unwrap(), oracle::multicut(&og, &[(0, 10), (3, 6)]).0);
}
