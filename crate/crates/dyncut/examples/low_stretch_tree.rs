//! Average stretch of the spanning-tree builders on a grid.

use dyncut::lsst::{average_stretch, lsst, Cheapest, ShortestPathTree, SpanningTreeBuilder, StarDecomposition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let side = 8;
    let id = |r: usize, c: usize| r * side + c;
    let mut edges = Vec::new();
    for r in 0..side {
        for c in 0..side {
            if c + 1 < side {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < side {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    let lengths = vec![1.0; edges.len()];
    let builders: [(&str, Box<dyn SpanningTreeBuilder>); 3] =
        [("star decomposition", Box::new(StarDecomposition)), ("shortest paths", Box::new(ShortestPathTree)), ("cheapest of both", Box::new(Cheapest::default()))];
    for (name, b) in builders {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let tree = lsst(b.as_ref(), side * side, &edges, &lengths, &mut rng);
        println!("{name:<20} average stretch {:.3}", average_stretch(side * side, &edges, &lengths, &tree));
    }
}
