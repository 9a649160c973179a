use num_traits::Zero;
use rand::seq::index::sample;
use rand::Rng;

use super::instance::{JTreeInstance, TreeSeed};
use super::mwu::{mwu_build, MwuConfig, MwuOutcome};
use crate::graph::{AppliedUpdate, Capacity, DynamicMultiGraph, EdgeHandle, GraphError, GraphUpdate, VertexSplit};

/// Edge snapshot of a base graph in handle order, on raw vertex ids.
pub struct Snapshot {
    pub n: usize,
    pub handles: Vec<EdgeHandle>,
    pub edges: Vec<(usize, usize)>,
    pub caps: Vec<Capacity>,
}

impl Snapshot {
    pub fn of(g: &DynamicMultiGraph) -> Self {
        let mut s = Snapshot { n: g.vertex_bound(), handles: Vec::new(), edges: Vec::new(), caps: Vec::new() };
        for (h, r) in g.edges() {
            s.handles.push(h);
            s.edges.push((r.u.index(), r.v.index()));
            s.caps.push(r.cap);
        }
        s
    }
}

/// Runs the multiplicative-weights builder on `base` and turns every tree
/// into a seed in base handles.
pub fn tree_seeds(base: &DynamicMultiGraph, j: usize, cfg: &MwuConfig, rng: &mut impl Rng) -> (Vec<TreeSeed>, MwuOutcome) {
    let snap = Snapshot::of(base);
    let outcome = mwu_build(snap.n, &snap.edges, &snap.caps, j, cfg, rng);
    let seeds = outcome
        .trees
        .iter()
        .map(|t| TreeSeed {
            edges: t.tree.iter().map(|&e| (snap.handles[e], t.induced[e])).collect(),
            heavy: t.heavy.iter().map(|&e| snap.handles[e]).collect(),
        })
        .collect();
    (seeds, outcome)
}

/// A set of j-trees over one base graph, updated together.
#[derive(Clone, Debug)]
pub struct JTreeCollection {
    pub instances: Vec<JTreeInstance>,
    pub gamma: f64,
    pub escalations: u32,
    /// Trees the builder produced before any sampling.
    pub built: usize,
}

impl JTreeCollection {
    /// One instance per tree of the collection.
    pub fn build(base: &DynamicMultiGraph, j: usize, cfg: &MwuConfig, rng: &mut impl Rng) -> Self {
        Self::build_sampled(base, j, cfg, None, rng)
    }

    /// Instances for `samples` trees drawn without replacement, or for all
    /// trees when `samples` is absent or not smaller than the tree count.
    pub fn build_sampled(base: &DynamicMultiGraph, j: usize, cfg: &MwuConfig, samples: Option<usize>, rng: &mut impl Rng) -> Self {
        let (seeds, outcome) = tree_seeds(base, j, cfg, rng);
        let built = seeds.len();
        let chosen: Vec<usize> = match samples {
            Some(s) if s < built => {
                let mut idx = sample(rng, built, s).into_vec();
                idx.sort();
                idx
            }
            _ => (0..built).collect(),
        };
        let instances = chosen.iter().map(|&i| JTreeInstance::build(base, &seeds[i], rng)).collect();
        JTreeCollection { instances, gamma: outcome.gamma, escalations: outcome.escalations, built }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn max_roots(&self) -> usize {
        self.instances.iter().map(|i| i.root_count()).max().unwrap_or(0)
    }

    /// Forwards one base update. Deletions must arrive before `base` drops
    /// the edge, insertions after `base` holds it.
    pub fn absorb(&mut self, base: &DynamicMultiGraph, update: &AppliedUpdate) -> Result<Vec<Vec<AppliedUpdate>>, GraphError> {
        let mut logs = Vec::with_capacity(self.instances.len());
        for inst in &mut self.instances {
            let mut log = Vec::new();
            match update {
                AppliedUpdate::Inserted { edge, .. } => inst.insert_edge(base, *edge, &mut log)?,
                AppliedUpdate::Deleted { edge, .. } => inst.delete_edge(base, *edge, &mut log)?,
                AppliedUpdate::VertexAdded(v) => inst.add_vertex(v.index(), &mut log),
                AppliedUpdate::Split(_) => panic!("base splits are simulated by the caller"),
            }
            logs.push(log);
        }
        Ok(logs)
    }
}

impl JTreeCollection {
    /// Applies `update` to `base` and forwards it to every instance. A split
    /// reaches the instances as a fresh vertex, then each physically moved
    /// edge is deleted and reinserted at the new vertex under its old handle,
    /// so `base` ends up exactly as `split_vertex` would leave it.
    pub fn apply(&mut self, base: &mut DynamicMultiGraph, update: &GraphUpdate) -> Result<(AppliedUpdate, Vec<Vec<AppliedUpdate>>), GraphError> {
        let mut logs: Vec<Vec<AppliedUpdate>> = vec![Vec::new(); self.instances.len()];
        let mut absorb = |coll: &mut Self, base: &DynamicMultiGraph, u: &AppliedUpdate| -> Result<(), GraphError> {
            for (log, l) in logs.iter_mut().zip(coll.absorb(base, u)?) {
                log.extend(l);
            }
            Ok(())
        };
        let applied = match update {
            GraphUpdate::Insert { .. } => {
                let applied = base.apply(update)?;
                absorb(self, base, &applied)?;
                applied
            }
            GraphUpdate::Delete { edge } => {
                let r = base.edge(*edge).ok_or(GraphError::UnknownEdge(*edge))?.clone();
                let applied = AppliedUpdate::Deleted { edge: *edge, u: r.u, v: r.v, cap: r.cap };
                absorb(self, base, &applied)?;
                base.delete_edge(*edge)?;
                applied
            }
            GraphUpdate::Split { vertex, moved } => {
                // Validate on a throwaway copy of the incident edges only.
                let mut probe = DynamicMultiGraph::with_vertices(base.vertex_bound());
                for &h in base.incident(*vertex) {
                    let r = base.edge(h).expect("incident edge");
                    probe.insert_edge_with_handle(h, r.u, r.v, r.cap)?;
                }
                let split = probe.split_vertex(*vertex, moved)?;
                let w = base.add_vertex();
                debug_assert_eq!(w, split.new_vertex);
                absorb(self, base, &AppliedUpdate::VertexAdded(w))?;
                for &h in &split.moved {
                    let r = base.edge(h).expect("incident edge").clone();
                    let other = r.other(*vertex);
                    absorb(self, base, &AppliedUpdate::Deleted { edge: h, u: r.u, v: r.v, cap: r.cap })?;
                    base.delete_edge(h)?;
                    base.insert_edge_with_handle(h, w, other, r.cap)?;
                    absorb(self, base, &AppliedUpdate::Inserted { edge: h, u: w, v: other, cap: r.cap })?;
                }
                AppliedUpdate::Split(VertexSplit { new_vertex: w, ..split })
            }
        };
        Ok((applied, logs))
    }
}

/// Measured quality of the collection: the largest per-edge value of
/// `1 + (4/k) Σ tree_cap/cap` over instances whose forest still holds it.
pub fn collection_quality(base: &DynamicMultiGraph, instances: &[JTreeInstance]) -> Capacity {
    let k = Capacity::from_integer(instances.len().max(1) as i128);
    let mut best = Capacity::from_integer(1);
    for (h, r) in base.edges() {
        let mut acc = Capacity::zero();
        for inst in instances {
            if inst.in_forest(h) {
                acc += inst.tree_capacity(h) / r.cap;
            }
        }
        let val = Capacity::from_integer(1) + acc * Capacity::from_integer(4) / k;
        if val > best {
            best = val;
        }
    }
    best
}
