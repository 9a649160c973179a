//! Fully dynamic cut sparsifier that tolerates vertex splits.
//!
//! Capacities are scaled to integers and split into binary classes; each
//! class is an uncapacitated graph handled on its own. Within a class, level
//! `i` keeps a forest bundle of the level-`i-1` graph and samples every edge
//! outside that bundle into level `i` with a fair coin, doubling its weight.
//! The output is the union of all bundles and the last level, each edge
//! weighted by its level and class.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bundle::SpanningForestBundle;
use crate::graph::{AppliedUpdate, Capacity, DynamicMultiGraph, EdgeHandle, GraphError, GraphUpdate, VertexId};

#[derive(Debug, Error)]
pub enum SparsifierError {
    #[error("epsilon must lie in (0, 1), got {0}")]
    Epsilon(f64),
    #[error("capacity scale must be positive")]
    Scale,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, Serialize)]
pub struct SparsifierConfig {
    pub epsilon: f64,
    /// Failure exponent.
    pub c: f64,
    /// Sampling constant.
    pub c_xi: f64,
    /// Capacities are multiplied by this and rounded up to integers.
    pub cap_scale: i128,
    pub seed: u64,
    /// Overrides the computed bundle depth.
    pub bundle_depth: Option<usize>,
    /// Overrides the computed number of sampling levels.
    pub levels: Option<usize>,
}

impl Default for SparsifierConfig {
    fn default() -> Self {
        SparsifierConfig { epsilon: 0.5, c: 1.0, c_xi: 1.0, cap_scale: 1, seed: 0, bundle_depth: None, levels: None }
    }
}

impl SparsifierConfig {
    pub fn validate(&self) -> Result<(), SparsifierError> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(SparsifierError::Epsilon(self.epsilon));
        }
        if self.cap_scale <= 0 {
            return Err(SparsifierError::Scale);
        }
        Ok(())
    }

    /// Number of sampling levels for a graph on `n` vertices: ⌈log₂(2n)⌉.
    pub fn level_count(&self, n: usize) -> usize {
        self.levels.unwrap_or_else(|| ((2 * n.max(1)) as f64).log2().ceil().max(1.0) as usize)
    }

    /// Bundle depth: ⌈2·C_ξ·c·log₂²(2n)/ε²⌉.
    pub fn bundle_depth(&self, n: usize) -> usize {
        self.bundle_depth.unwrap_or_else(|| {
            let l = ((2 * n.max(1)) as f64).log2();
            (2.0 * self.c_xi * self.c * l * l / (self.epsilon * self.epsilon)).ceil().max(1.0) as usize
        })
    }
}

/// An output edge: the input edge it came from and its capacity class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SparseKey {
    pub edge: EdgeHandle,
    pub class: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SparseChange {
    /// Emitted first; `moved` are output edges that followed the input edges
    /// to `new_vertex`.
    Split { vertex: VertexId, new_vertex: VertexId, moved: Vec<SparseKey> },
    Deleted { key: SparseKey, cap: Capacity },
    Recapacitated { key: SparseKey, u: VertexId, v: VertexId, old: Capacity, new: Capacity },
    Inserted { key: SparseKey, u: VertexId, v: VertexId, cap: Capacity },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassRecourse {
    pub class: u8,
    pub inserted: usize,
    pub deleted: usize,
    pub recapacitated: usize,
}

#[derive(Clone, Debug, Default)]
pub struct SparsifierRecourse {
    pub inserted: usize,
    pub deleted: usize,
    pub recapacitated: usize,
    pub per_class: Vec<ClassRecourse>,
    pub changes: Vec<SparseChange>,
}

impl SparsifierRecourse {
    /// Per-class bounds on edge-set changes for the given update kind.
    pub fn within_bounds(&self, update: &AppliedUpdate, levels: usize, depth: usize) -> bool {
        self.per_class.iter().all(|c| match update {
            AppliedUpdate::Inserted { .. } => c.inserted <= 1 && c.deleted == 0,
            AppliedUpdate::Deleted { .. } => c.inserted <= 1 && c.deleted <= 1,
            AppliedUpdate::Split(_) => c.inserted <= levels * depth && c.deleted == 0,
            AppliedUpdate::VertexAdded(_) => c.inserted == 0 && c.deleted == 0,
        })
    }
}

#[derive(Clone, Debug)]
enum LevelEvent {
    Enter(EdgeHandle),
    Leave(EdgeHandle, VertexId, VertexId),
    Split(VertexId, VertexId),
}

#[derive(Clone, Debug)]
struct ClassState {
    levels: usize,
    /// `member[i][h]`: edge `h` is in the level-`i` graph.
    member: Vec<Vec<bool>>,
    /// `bundles[i - 1]` packs the level-`i-1` graph.
    bundles: Vec<SpanningForestBundle>,
    /// `coins[i][h]`: the coin deciding whether `h` reaches level `i`, held
    /// while `h` sits in level `i-1` outside its bundle.
    coins: Vec<Vec<Option<bool>>>,
    /// Level exponent of each edge in the published output.
    published: Vec<Option<u8>>,
    rng: ChaCha8Rng,
    coin_draws: u64,
}

fn set_flag<T: Clone + Default>(v: &mut Vec<T>, i: usize, x: T) {
    if v.len() <= i {
        v.resize(i + 1, T::default());
    }
    v[i] = x;
}

fn flag<T: Clone + Default>(v: &[T], i: usize) -> T {
    v.get(i).cloned().unwrap_or_default()
}

impl ClassState {
    fn new(levels: usize, depth: usize, seed: u64, class: u8) -> Self {
        ClassState {
            levels,
            member: vec![Vec::new(); levels + 1],
            bundles: (0..levels).map(|_| SpanningForestBundle::new(depth)).collect(),
            coins: vec![Vec::new(); levels + 1],
            published: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed ^ (u64::from(class) + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
            coin_draws: 0,
        }
    }

    /// Exponent of the output capacity of `h`, if `h` is in the output.
    fn level_of(&self, h: EdgeHandle) -> Option<u8> {
        for (i, b) in self.bundles.iter().enumerate() {
            if b.contains(h) {
                return Some(i as u8);
            }
        }
        flag(&self.member[self.levels], h.index()).then_some(self.levels as u8)
    }

    fn outside_bundle(&self, i: usize, h: EdgeHandle) -> bool {
        flag(&self.member[i - 1], h.index()) && !self.bundles[i - 1].contains(h)
    }

    /// Runs level events through every level; returns handles whose output
    /// level may have changed.
    fn run(&mut self, g: &DynamicMultiGraph, first: Vec<LevelEvent>, moved: &[EdgeHandle], gone: Option<(EdgeHandle, VertexId, VertexId)>) -> Vec<EdgeHandle> {
        let mut touched = Vec::new();
        let mut events = first;
        for ev in &events {
            match *ev {
                LevelEvent::Enter(h) => set_flag(&mut self.member[0], h.index(), true),
                LevelEvent::Leave(h, ..) => set_flag(&mut self.member[0], h.index(), false),
                LevelEvent::Split(..) => {}
            }
        }
        for i in 1..=self.levels {
            if events.is_empty() {
                break;
            }
            let mut cand = Vec::new();
            let mut split = None;
            for ev in events {
                let r = match ev {
                    LevelEvent::Split(v, w) => {
                        split = Some((v, w));
                        self.bundles[i - 1].split(g, v, w, moved)
                    }
                    LevelEvent::Enter(h) => {
                        cand.push(h);
                        self.bundles[i - 1].insert(g, h)
                    }
                    LevelEvent::Leave(h, u, v) => {
                        cand.push(h);
                        self.bundles[i - 1].delete(g, h, u, v)
                    }
                };
                cand.extend(r.inserted);
                cand.extend(r.deleted);
            }
            let mut seen = BTreeSet::new();
            cand.retain(|h| seen.insert(*h));
            touched.extend(cand.iter().copied());
            let mut next = Vec::new();
            if let Some((v, w)) = split {
                next.push(LevelEvent::Split(v, w));
            }
            for h in cand {
                let out = self.outside_bundle(i, h);
                let below = flag(&self.member[i], h.index());
                if out {
                    if flag(&self.coins[i], h.index()).is_none() {
                        let heads = self.rng.gen_bool(0.5);
                        self.coin_draws += 1;
                        set_flag(&mut self.coins[i], h.index(), Some(heads));
                        if heads && !below {
                            set_flag(&mut self.member[i], h.index(), true);
                            next.push(LevelEvent::Enter(h));
                        }
                    }
                } else {
                    set_flag(&mut self.coins[i], h.index(), None);
                    if below {
                        set_flag(&mut self.member[i], h.index(), false);
                        let (u, v) = match gone {
                            Some((x, u, v)) if x == h => (u, v),
                            _ => g.endpoints(h).expect("live edge"),
                        };
                        next.push(LevelEvent::Leave(h, u, v));
                    }
                }
            }
            events = next;
        }
        touched
    }
}

/// Dynamic (1±ε) cut sparsifier of a graph it mirrors.
#[derive(Clone, Debug)]
pub struct CutSparsifier {
    config: SparsifierConfig,
    graph: DynamicMultiGraph,
    levels: usize,
    depth: usize,
    classes: Vec<Option<ClassState>>,
    /// Integerized capacity of each input edge.
    scaled: Vec<u128>,
    output_edges: usize,
    total_inserted: u64,
    total_deleted: u64,
    total_recapacitated: u64,
}

impl CutSparsifier {
    pub fn new(g: &DynamicMultiGraph, config: SparsifierConfig) -> Result<Self, SparsifierError> {
        config.validate()?;
        let n = g.vertex_count().max(2);
        let mut s = CutSparsifier {
            levels: config.level_count(n),
            depth: config.bundle_depth(n),
            config,
            graph: DynamicMultiGraph::new(),
            classes: Vec::new(),
            scaled: Vec::new(),
            output_edges: 0,
            total_inserted: 0,
            total_deleted: 0,
            total_recapacitated: 0,
        };
        for v in g.vertices() {
            s.graph.add_vertex_with_id(v)?;
        }
        let edges: Vec<_> = g.edges().map(|(h, r)| (h, r.u, r.v, r.cap)).collect();
        for (edge, u, v, cap) in edges {
            s.replay(&AppliedUpdate::Inserted { edge, u, v, cap })?;
        }
        s.total_inserted = 0;
        s.total_deleted = 0;
        s.total_recapacitated = 0;
        Ok(s)
    }

    pub fn config(&self) -> &SparsifierConfig {
        &self.config
    }

    pub fn level_count(&self) -> usize {
        self.levels
    }

    pub fn bundle_depth(&self) -> usize {
        self.depth
    }

    pub fn graph(&self) -> &DynamicMultiGraph {
        &self.graph
    }

    pub fn class_count(&self) -> usize {
        self.classes.iter().filter(|c| c.is_some()).count()
    }

    pub fn edge_count(&self) -> usize {
        self.output_edges
    }

    /// Insertions plus deletions plus capacity changes applied to the output
    /// since construction.
    pub fn total_recourse(&self) -> u64 {
        self.total_inserted + self.total_deleted + self.total_recapacitated
    }

    /// Edge-set changes (insertions plus deletions) since construction.
    pub fn edge_set_recourse(&self) -> u64 {
        self.total_inserted + self.total_deleted
    }

    pub fn coin_draws(&self) -> u64 {
        self.classes.iter().flatten().map(|c| c.coin_draws).sum()
    }

    /// Rounds a capacity up to an integer multiple of 1/cap_scale.
    pub fn integerize(&self, cap: Capacity) -> u128 {
        let scaled = cap * Capacity::from_integer(self.config.cap_scale);
        scaled.ceil().to_integer().to_u128().expect("positive capacity")
    }

    fn output_cap(&self, class: u8, level: u8) -> Capacity {
        Capacity::new(1i128 << (u32::from(class) + u32::from(level)), self.config.cap_scale)
    }

    pub fn capacity(&self, key: SparseKey) -> Option<Capacity> {
        let c = self.classes.get(key.class as usize)?.as_ref()?;
        let lv = flag(&c.published, key.edge.index())?;
        Some(self.output_cap(key.class, lv))
    }

    /// The sparsifier as an explicit edge list, ordered by key.
    pub fn edges(&self) -> Vec<(SparseKey, VertexId, VertexId, Capacity)> {
        let mut out = Vec::with_capacity(self.output_edges);
        for (h, _) in self.graph.edges() {
            for (d, c) in self.classes.iter().enumerate() {
                if let Some(lv) = c.as_ref().and_then(|c| flag(&c.published, h.index())) {
                    let (u, v) = self.graph.endpoints(h).expect("live");
                    out.push((SparseKey { edge: h, class: d as u8 }, u, v, self.output_cap(d as u8, lv)));
                }
            }
        }
        out.sort_by_key(|e| e.0);
        out
    }

    /// The sparsifier as a graph with the input's vertex ids; handle order
    /// follows key order.
    pub fn to_graph(&self) -> DynamicMultiGraph {
        let mut h = DynamicMultiGraph::new();
        for v in self.graph.vertices() {
            h.add_vertex_with_id(v).expect("fresh id");
        }
        for (_, u, v, c) in self.edges() {
            h.insert_edge(u, v, c).expect("valid edge");
        }
        h
    }

    /// Applies an update to the mirrored graph and the sparsifier.
    pub fn update(&mut self, update: &GraphUpdate) -> Result<(AppliedUpdate, SparsifierRecourse), SparsifierError> {
        let applied = self.graph.apply(update)?;
        let r = self.absorb(&applied);
        Ok((applied, r))
    }

    /// Replays an update produced by another graph with the same ids.
    pub fn replay(&mut self, update: &AppliedUpdate) -> Result<SparsifierRecourse, SparsifierError> {
        self.graph.replay(update)?;
        Ok(self.absorb(update))
    }

    fn class_mut(&mut self, d: usize) -> &mut ClassState {
        if self.classes.len() <= d {
            self.classes.resize_with(d + 1, || None);
        }
        let (levels, depth, seed) = (self.levels, self.depth, self.config.seed);
        self.classes[d].get_or_insert_with(|| ClassState::new(levels, depth, seed, d as u8))
    }

    fn bits(x: u128) -> impl Iterator<Item = usize> {
        (0..128).filter(move |&d| x >> d & 1 == 1)
    }

    fn absorb(&mut self, update: &AppliedUpdate) -> SparsifierRecourse {
        let mut touched: Vec<(usize, Vec<EdgeHandle>)> = Vec::new();
        let mut changes = Vec::new();
        // `self.graph` is moved out so class states can borrow it alongside `self`.
        let g = std::mem::take(&mut self.graph);
        match update {
            AppliedUpdate::Inserted { edge, cap, .. } => {
                let x = self.integerize(*cap);
                set_flag(&mut self.scaled, edge.index(), x);
                for d in Self::bits(x) {
                    let t = self.class_mut(d).run(&g, vec![LevelEvent::Enter(*edge)], &[], None);
                    touched.push((d, t));
                }
            }
            AppliedUpdate::Deleted { edge, u, v, .. } => {
                let x = flag(&self.scaled, edge.index());
                for d in Self::bits(x) {
                    let t = self.class_mut(d).run(&g, vec![LevelEvent::Leave(*edge, *u, *v)], &[], Some((*edge, *u, *v)));
                    touched.push((d, t));
                }
            }
            AppliedUpdate::Split(s) => {
                let mut moved_keys = Vec::new();
                for &h in &s.moved {
                    for (d, c) in self.classes.iter().enumerate() {
                        if c.as_ref().is_some_and(|c| flag(&c.published, h.index()).is_some()) {
                            moved_keys.push(SparseKey { edge: h, class: d as u8 });
                        }
                    }
                }
                moved_keys.sort();
                changes.push(SparseChange::Split { vertex: s.vertex, new_vertex: s.new_vertex, moved: moved_keys });
                for d in 0..self.classes.len() {
                    if let Some(c) = self.classes[d].as_mut() {
                        let t = c.run(&g, vec![LevelEvent::Split(s.vertex, s.new_vertex)], &s.moved, None);
                        touched.push((d, t));
                    }
                }
            }
            AppliedUpdate::VertexAdded(_) => {}
        }
        self.graph = g;
        let mut rec = SparsifierRecourse::default();
        let mut diff: BTreeMap<SparseKey, (Option<u8>, Option<u8>)> = BTreeMap::new();
        for (d, hs) in touched {
            let c = self.classes[d].as_mut().expect("class exists");
            let mut cr = ClassRecourse { class: d as u8, ..Default::default() };
            for h in hs {
                let key = SparseKey { edge: h, class: d as u8 };
                if diff.contains_key(&key) {
                    continue;
                }
                let old = flag(&c.published, h.index());
                let new = c.level_of(h);
                if old == new {
                    continue;
                }
                set_flag(&mut c.published, h.index(), new);
                match (old, new) {
                    (None, Some(_)) => cr.inserted += 1,
                    (Some(_), None) => cr.deleted += 1,
                    _ => cr.recapacitated += 1,
                }
                diff.insert(key, (old, new));
            }
            rec.inserted += cr.inserted;
            rec.deleted += cr.deleted;
            rec.recapacitated += cr.recapacitated;
            rec.per_class.push(cr);
        }
        let ends = |h: EdgeHandle| self.graph.endpoints(h);
        let mut ins = Vec::new();
        let mut rcp = Vec::new();
        for (key, (old, new)) in diff {
            match (old, new) {
                (Some(o), None) => changes.push(SparseChange::Deleted { key, cap: self.output_cap(key.class, o) }),
                (None, Some(n)) => {
                    let (u, v) = ends(key.edge).expect("output edge is live");
                    ins.push(SparseChange::Inserted { key, u, v, cap: self.output_cap(key.class, n) });
                }
                (Some(o), Some(n)) => {
                    let (u, v) = ends(key.edge).expect("output edge is live");
                    rcp.push(SparseChange::Recapacitated { key, u, v, old: self.output_cap(key.class, o), new: self.output_cap(key.class, n) });
                }
                (None, None) => {}
            }
        }
        changes.extend(rcp);
        changes.extend(ins);
        rec.changes = changes;
        self.output_edges = self.output_edges + rec.inserted - rec.deleted;
        self.total_inserted += rec.inserted as u64;
        self.total_deleted += rec.deleted as u64;
        self.total_recapacitated += rec.recapacitated as u64;
        rec
    }

    /// Largest over smallest output capacity, compared against the input's
    /// largest integerized capacity `U`: the ratio stays within `2^levels·U`.
    pub fn capacity_ratio_ok(&self) -> bool {
        let caps: Vec<Capacity> = self.edges().into_iter().map(|e| e.3).collect();
        let (Some(lo), Some(hi)) = (caps.iter().min(), caps.iter().max()) else {
            return true;
        };
        let u = self.graph.edges().map(|(h, _)| flag(&self.scaled, h.index())).max().unwrap_or(1);
        hi / lo <= Capacity::from_integer((u as i128) << self.levels)
    }

    /// Edge budget: every class contributes at most `levels` bundles of
    /// `depth` forests plus a sampled remainder no larger than one forest.
    pub fn edge_budget(&self) -> usize {
        let n = self.graph.vertex_count().max(1);
        self.class_count() * (self.levels * self.depth + 1) * n
    }

    /// Checks that every coin sits exactly on an edge in `G_{i-1}` outside
    /// `B_i`, and that level membership agrees with the coins.
    pub fn coin_ledger_consistent(&self) -> bool {
        self.classes.iter().flatten().all(|c| {
            (1..=c.levels).all(|i| {
                self.graph.edges().all(|(h, _)| {
                    let coin = flag(&c.coins[i], h.index());
                    let member = flag(&c.member[i], h.index());
                    coin.is_some() == c.outside_bundle(i, h) && member == (coin == Some(true))
                })
            })
        })
    }

    /// Sum over classes of `2^class` times the class membership, which must
    /// reproduce each integerized capacity.
    pub fn class_decomposition_exact(&self) -> bool {
        self.graph.edges().all(|(h, _)| {
            let mut sum = 0u128;
            for (d, c) in self.classes.iter().enumerate() {
                if c.as_ref().is_some_and(|c| flag(&c.member[0], h.index())) {
                    sum += 1 << d;
                }
            }
            sum == flag(&self.scaled, h.index())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cap;

    fn path(n: u32) -> DynamicMultiGraph {
        let e: Vec<_> = (0..n - 1).map(|i| (i, i + 1, cap(1))).collect();
        DynamicMultiGraph::from_edges(n as usize, &e).unwrap()
    }

    #[test]
    fn trees_pass_through_unchanged() {
        let g = path(12);
        let s = CutSparsifier::new(&g, SparsifierConfig { bundle_depth: Some(1), ..Default::default() }).unwrap();
        let e = s.edges();
        assert_eq!(e.len(), 11);
        assert!(e.iter().all(|x| x.3 == cap(1)));
    }

    #[test]
    fn saturated_bundle_keeps_the_graph() {
        let g = DynamicMultiGraph::from_edges(4, &[(0, 1, cap(3)), (1, 2, cap(1)), (2, 0, cap(2)), (0, 3, cap(5))]).unwrap();
        let s = CutSparsifier::new(&g, SparsifierConfig::default()).unwrap();
        let h = s.to_graph();
        for mask in 1u32..8 {
            let side = |v: VertexId| mask >> v.0 & 1 == 1;
            assert_eq!(h.cut_value(side), g.cut_value(side));
        }
        assert!(s.class_decomposition_exact());
    }

    #[test]
    fn rejects_bad_epsilon() {
        let g = path(3);
        assert!(matches!(CutSparsifier::new(&g, SparsifierConfig { epsilon: 1.5, ..Default::default() }), Err(SparsifierError::Epsilon(_))));
    }

    #[test]
    fn fractional_capacities_round_up() {
        let g = DynamicMultiGraph::from_edges(2, &[(0, 1, Capacity::new(5, 4))]).unwrap();
        let s = CutSparsifier::new(&g, SparsifierConfig { cap_scale: 2, ..Default::default() }).unwrap();
        // 5/4 * 2 = 2.5 rounds to 3 = 2 + 1: two classes, total 3/2.
        let total: Capacity = s.edges().iter().map(|e| e.3).sum();
        assert_eq!(total, Capacity::new(3, 2));
    }

    #[test]
    fn deleting_edge_outside_output_changes_nothing() {
        let mut e = Vec::new();
        for u in 0..6u32 {
            for v in u + 1..6 {
                e.push((u, v, cap(1)));
            }
        }
        let g = DynamicMultiGraph::from_edges(6, &e).unwrap();
        let mut s = CutSparsifier::new(&g, SparsifierConfig { bundle_depth: Some(1), levels: Some(1), seed: 3, ..Default::default() }).unwrap();
        let absent = g.edges().map(|(h, _)| h).find(|&h| s.capacity(SparseKey { edge: h, class: 0 }).is_none());
        if let Some(h) = absent {
            let (_, r) = s.update(&GraphUpdate::Delete { edge: h }).unwrap();
            assert_eq!((r.inserted, r.deleted, r.recapacitated), (0, 0, 0));
        }
    }
}
