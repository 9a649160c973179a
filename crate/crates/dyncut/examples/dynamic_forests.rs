//! Link-cut and Euler-tour forests side by side on a small path.

use dyncut::forest::{EulerTourForest, LinkCutForest};

fn main() {
    let mut lct: LinkCutForest<u32> = LinkCutForest::new(6);
    let mut ett = EulerTourForest::new(6);
    // Path 0-1-2-3-4 with the key of each edge equal to a made-up weight.
    for (id, (a, b, w)) in [(0, 1, 7), (1, 2, 3), (2, 3, 9), (3, 4, 5)].into_iter().enumerate() {
        lct.link(a, b, id as u64, w);
        ett.link(a, b, id as u64);
    }
    for v in 0..6 {
        ett.set_value(v, 1);
    }
    lct.make_root(0);
    println!("lightest edge on the path 4 -> 0: {:?}", lct.path_min(4));
    println!("lightest edge between 2 and 4: {:?}", lct.path_min_between(2, 4));
    println!("vertices on the side of edge 1 holding 3: {:?}", ett.side_sum(1, 3));

    lct.cut(2);
    ett.cut(2);
    println!("after cutting edge 2: 0~4 {} / {}", lct.connected(0, 4), ett.connected(0, 4));
    println!("component of 4: {:?}", ett.component_vertices(4));
}
