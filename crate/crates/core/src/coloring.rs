//! Remove-contract reduction of strongly involutive self-dual maps down to
//! the tetrahedron, and the 4-colourings of diameter graphs it induces.
//!
//! One step contracts an edge `ab` that is not a diameter edge and deletes
//! the edge `xy` separating the faces `tau(a)` and `tau(b)`. Degree-2
//! vertices are then smoothed and 2-gon faces collapsed until none remain.
//! Darts keep the label of the face they started on, which is how `tau` is
//! carried over to the smaller map.

use std::collections::VecDeque;

use thiserror::Error;

use crate::planar_map::{Dart, FaceId, PlanarMap, Vertex};
use crate::selfdual::{certify, diameter_graph, CertifyError, DiameterGraph, SelfDualIso};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("edge {0}-{1} is not a map edge outside the diameter graph")]
    NotReducible(Vertex, Vertex),
    #[error("reduced map failed re-certification: {0}")]
    CertificationFailure(String),
}

impl From<CertifyError> for ColoringError {
    fn from(e: CertifyError) -> Self {
        ColoringError::CertificationFailure(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CleanupEvent {
    /// A degree-2 vertex (input labels) replaced by a single edge.
    SmoothedVertex(Vertex),
    /// A 2-gon, named by the input face its darts came from.
    CollapsedDigon(FaceId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub contracted_edge: (Vertex, Vertex),
    pub deleted_edge: (Vertex, Vertex),
    pub cleanup_log: Vec<CleanupEvent>,
    /// `survivors[v']` is the input vertex that became output vertex `v'`.
    /// The contracted vertex is listed under `a`.
    pub survivors: Vec<Vertex>,
}

/// Queue discipline for the cleanup phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CleanupOrder {
    Fifo,
    Lifo,
}

/// Smallest `(a, b)` with `a < b` that is a map edge but not a diameter edge.
pub fn pick_reducible_edge(map: &PlanarMap, iso: &SelfDualIso) -> Option<(Vertex, Vertex)> {
    let d = diameter_graph(map, iso);
    map.edges().into_iter().find(|&(a, b)| !d.has_edge(a, b))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Item {
    Vertex(Vertex),
    Face(Dart),
}

/// Mutable dart structure with deletion. `label[d]` is the input face of `d`.
struct Work {
    twin: Vec<Dart>,
    next: Vec<Dart>,
    prev: Vec<Dart>,
    origin: Vec<Vertex>,
    label: Vec<FaceId>,
    alive: Vec<bool>,
    degree: Vec<usize>,
    vertex_alive: Vec<bool>,
}

impl Work {
    fn new(map: &PlanarMap) -> Self {
        let darts = map.dart_count();
        let next = map.nexts().to_vec();
        let mut prev = vec![0; darts];
        for d in 0..darts {
            prev[next[d]] = d;
        }
        Work {
            twin: map.twins().to_vec(),
            next,
            prev,
            origin: map.origins().to_vec(),
            label: (0..darts).map(|d| map.face_of(d)).collect(),
            alive: vec![true; darts],
            degree: map.degrees(),
            vertex_alive: vec![true; map.vertex_count()],
        }
    }

    fn face_next(&self, d: Dart) -> Dart {
        self.next[self.twin[d]]
    }

    fn unlink(&mut self, d: Dart) {
        let (p, n) = (self.prev[d], self.next[d]);
        self.next[p] = n;
        self.prev[n] = p;
        self.alive[d] = false;
        self.degree[self.origin[d]] -= 1;
    }

    fn delete_edge(&mut self, d: Dart) {
        let t = self.twin[d];
        self.unlink(d);
        self.unlink(t);
    }

    /// Contracts the edge of `d`, merging its target into its origin.
    fn contract(&mut self, d: Dart) {
        let t = self.twin[d];
        let (a, b) = (self.origin[d], self.origin[t]);
        let (p, n) = (self.prev[d], self.next[d]);
        let (s, e) = (self.next[t], self.prev[t]);
        let mut x = s;
        while x != t {
            self.origin[x] = a;
            x = self.next[x];
        }
        self.next[p] = s;
        self.prev[s] = p;
        self.next[e] = n;
        self.prev[n] = e;
        self.alive[d] = false;
        self.alive[t] = false;
        self.degree[a] += self.degree[b] - 2;
        self.degree[b] = 0;
        self.vertex_alive[b] = false;
    }

    fn dart_at(&self, v: Vertex) -> Dart {
        (0..self.origin.len())
            .find(|&d| self.alive[d] && self.origin[d] == v)
            .expect("live vertex has a dart")
    }

    /// Replaces the two edges at degree-2 vertex `v` by one edge. Returns the
    /// two other endpoints.
    fn smooth(&mut self, v: Vertex) -> (Vertex, Vertex) {
        let d1 = self.dart_at(v);
        let d2 = self.next[d1];
        let (t1, t2) = (self.twin[d1], self.twin[d2]);
        self.alive[d1] = false;
        self.alive[d2] = false;
        self.twin[t1] = t2;
        self.twin[t2] = t1;
        self.degree[v] = 0;
        self.vertex_alive[v] = false;
        (self.origin[t1], self.origin[t2])
    }

    /// Collapses the 2-gon through `g1` into a single edge.
    fn collapse_digon(&mut self, g1: Dart) -> (Vertex, Vertex) {
        let g2 = self.face_next(g1);
        let (t1, t2) = (self.twin[g1], self.twin[g2]);
        self.unlink(g1);
        self.unlink(g2);
        self.twin[t1] = t2;
        self.twin[t2] = t1;
        (self.origin[t1], self.origin[t2])
    }

    fn is_digon(&self, d: Dart) -> bool {
        self.alive[d] && {
            let g = self.face_next(d);
            g != d && self.face_next(g) == d
        }
    }

    fn pending(&self) -> Vec<Item> {
        let mut items: Vec<Item> = (0..self.degree.len())
            .filter(|&v| self.vertex_alive[v] && self.degree[v] == 2)
            .map(Item::Vertex)
            .collect();
        for d in 0..self.origin.len() {
            if self.is_digon(d) && d < self.face_next(d) {
                items.push(Item::Face(d));
            }
        }
        items
    }

    fn cleanup(&mut self, order: CleanupOrder, log: &mut Vec<CleanupEvent>) {
        let mut queue: VecDeque<Item> = self.pending().into();
        loop {
            let item = match order {
                CleanupOrder::Fifo => queue.pop_front(),
                CleanupOrder::Lifo => queue.pop_back(),
            };
            let Some(item) = item else {
                // Anything missed by the local bookkeeping is caught here.
                let rest = self.pending();
                if rest.is_empty() {
                    return;
                }
                queue.extend(rest);
                continue;
            };
            let touched = match item {
                Item::Vertex(v) if self.vertex_alive[v] && self.degree[v] == 2 => {
                    log.push(CleanupEvent::SmoothedVertex(v));
                    self.smooth(v)
                }
                Item::Face(d) if self.is_digon(d) => {
                    log.push(CleanupEvent::CollapsedDigon(self.label[d]));
                    self.collapse_digon(d)
                }
                _ => continue,
            };
            for v in [touched.0, touched.1] {
                if self.vertex_alive[v] && self.degree[v] == 2 {
                    queue.push_back(Item::Vertex(v));
                }
                let start = self.dart_at_opt(v);
                if let Some(start) = start {
                    let mut d = start;
                    loop {
                        if self.is_digon(d) {
                            queue.push_back(Item::Face(d.min(self.face_next(d))));
                        }
                        d = self.next[d];
                        if d == start {
                            break;
                        }
                    }
                }
            }
        }
    }

    fn dart_at_opt(&self, v: Vertex) -> Option<Dart> {
        if !self.vertex_alive[v] || self.degree[v] == 0 {
            return None;
        }
        Some(self.dart_at(v))
    }
}

fn fail<T>(msg: impl Into<String>) -> Result<T, ColoringError> {
    Err(ColoringError::CertificationFailure(msg.into()))
}

/// One remove-contract step with FIFO cleanup.
pub fn remove_contract(
    map: &PlanarMap,
    iso: &SelfDualIso,
    ab: (Vertex, Vertex),
) -> Result<(PlanarMap, SelfDualIso, ReductionStep), ColoringError> {
    remove_contract_with_order(map, iso, ab, CleanupOrder::Fifo)
}

pub fn remove_contract_with_order(
    map: &PlanarMap,
    iso: &SelfDualIso,
    ab: (Vertex, Vertex),
    order: CleanupOrder,
) -> Result<(PlanarMap, SelfDualIso, ReductionStep), ColoringError> {
    let (a, b) = ab;
    let not_reducible = Err(ColoringError::NotReducible(a, b));
    let Some(d_ab) = map.find_dart(a, b) else {
        return not_reducible;
    };
    if a == b || diameter_graph(map, iso).has_edge(a, b) {
        return not_reducible;
    }
    let (fa, fb) = (iso.tau[a], iso.tau[b]);
    let Some(d_xy) = map.face(fa).darts.iter().copied().find(|&d| map.face_of(map.twin(d)) == fb) else {
        return fail(format!("faces tau({a}) and tau({b}) share no edge"));
    };
    let (x, y) = (map.origin(d_xy), map.target(d_xy));
    let deleted_edge = (x.min(y), x.max(y));

    let mut w = Work::new(map);
    w.delete_edge(d_xy);
    w.contract(d_ab);
    let mut cleanup_log = Vec::new();
    w.cleanup(order, &mut cleanup_log);

    // Renumber surviving vertices and darts.
    let survivors: Vec<Vertex> = (0..map.vertex_count()).filter(|&v| w.vertex_alive[v]).collect();
    let mut new_vertex = vec![usize::MAX; map.vertex_count()];
    for (i, &v) in survivors.iter().enumerate() {
        new_vertex[v] = i;
    }
    let live: Vec<Dart> = (0..w.origin.len()).filter(|&d| w.alive[d]).collect();
    let mut new_dart = vec![usize::MAX; w.origin.len()];
    for (i, &d) in live.iter().enumerate() {
        new_dart[d] = i;
    }
    let twin = live.iter().map(|&d| new_dart[w.twin[d]]).collect();
    let next = live.iter().map(|&d| new_dart[w.next[d]]).collect();
    let origin = live.iter().map(|&d| new_vertex[w.origin[d]]).collect();
    let reduced = PlanarMap::from_darts(survivors.len(), twin, next, origin)
        .map_err(|e| ColoringError::CertificationFailure(e.to_string()))?;

    // Each input face label must land in at most one output face.
    let mut face_of_label = vec![None; map.face_count()];
    for (i, &d) in live.iter().enumerate() {
        let f = reduced.face_of(i);
        let slot = &mut face_of_label[w.label[d]];
        match *slot {
            None => *slot = Some(f),
            Some(g) if g == f => {}
            Some(_) => return fail(format!("input face {} split by the reduction", w.label[d])),
        }
    }
    if face_of_label[fa] != face_of_label[fb] {
        return fail("tau(a) and tau(b) did not merge");
    }
    let mut tau = Vec::with_capacity(survivors.len());
    for &v in &survivors {
        match face_of_label[iso.tau[v]] {
            Some(f) => tau.push(f),
            None => return fail(format!("face tau({v}) vanished while {v} survived")),
        }
    }
    let tau = SelfDualIso { tau };
    certify(&reduced, &tau)?;
    if !reduced.is_simple() || !reduced.is_three_connected() {
        return fail("reduced map is not simple and 3-connected");
    }
    if survivors.len() >= map.vertex_count() {
        return fail("vertex count did not decrease");
    }
    let step = ReductionStep {
        contracted_edge: (a.min(b), a.max(b)),
        deleted_edge,
        cleanup_log,
        survivors,
    };
    Ok((reduced, tau, step))
}

/// Union-find over the input vertices recording how the reduction merged
/// them, plus the order in which smoothed vertices left the map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeForest {
    pub parent: Vec<Vertex>,
    /// Representatives of classes smoothed away, in removal order.
    pub removed: Vec<Vertex>,
    /// Input-vertex representatives of the four K4 vertices.
    pub final_reps: Vec<Vertex>,
    pub steps: Vec<ReductionStep>,
    /// Reducible edges passed over because their step did not certify,
    /// with the index of the step at which that happened.
    pub rejected: Vec<(usize, (Vertex, Vertex))>,
}

impl MergeForest {
    pub fn find(&self, mut v: Vertex) -> Vertex {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    /// Classes of input vertices, each sorted, ordered by smallest member.
    pub fn classes(&self) -> Vec<Vec<Vertex>> {
        let mut by_root: Vec<Vec<Vertex>> = vec![Vec::new(); self.parent.len()];
        for v in 0..self.parent.len() {
            by_root[self.find(v)].push(v);
        }
        let mut out: Vec<_> = by_root.into_iter().filter(|c| !c.is_empty()).collect();
        out.sort();
        out
    }
}

/// Reduces to K4 and colours each input vertex by the class it ends in.
///
/// Classes that were smoothed away before the end are coloured in reverse
/// order of removal. At removal such a class has diameter edges only into
/// the two classes on its 2-gon, so a free colour always exists.
pub fn four_coloring(
    map: &PlanarMap,
    iso: &SelfDualIso,
) -> Result<(Vec<u8>, MergeForest), ColoringError> {
    certify(map, iso)?;
    let n0 = map.vertex_count();
    let mut forest = MergeForest {
        parent: (0..n0).collect(),
        removed: Vec::new(),
        final_reps: Vec::new(),
        steps: Vec::new(),
        rejected: Vec::new(),
    };
    // `orig[v]` is the input-vertex representative of current vertex `v`.
    let mut orig: Vec<Vertex> = (0..n0).collect();
    let mut cur = map.clone();
    let mut tau = iso.clone();
    while pick_reducible_edge(&cur, &tau).is_some() {
        let (ab, next_map, next_tau, step) = reduce_once(&cur, &tau, forest.steps.len(), &mut forest.rejected)?;
        forest.parent[orig[ab.1]] = orig[ab.0];
        for ev in &step.cleanup_log {
            if let CleanupEvent::SmoothedVertex(v) = *ev {
                forest.removed.push(orig[v]);
            }
        }
        orig = step.survivors.iter().map(|&v| orig[v]).collect();
        forest.steps.push(step);
        cur = next_map;
        tau = next_tau;
    }
    if cur.vertex_count() != 4 {
        return fail(format!("reduction stopped at {} vertices", cur.vertex_count()));
    }
    forest.final_reps = orig.clone();
    let colors = color_classes(map, iso, &forest)?;
    Ok((colors, forest))
}

type Reduced = ((Vertex, Vertex), PlanarMap, SelfDualIso, ReductionStep);

/// Applies the smallest reducible edge whose step certifies. Cleanup can
/// leave a 2-cut that no degree-2 vertex or 2-gon exposes; such edges are
/// logged in `rejected` and skipped.
fn reduce_once(
    map: &PlanarMap,
    iso: &SelfDualIso,
    step: usize,
    rejected: &mut Vec<(usize, (Vertex, Vertex))>,
) -> Result<Reduced, ColoringError> {
    let d = diameter_graph(map, iso);
    let mut first_err = None;
    for ab in map.edges().into_iter().filter(|&(a, b)| !d.has_edge(a, b)) {
        match remove_contract(map, iso, ab) {
            Ok((m, t, step)) => return Ok((ab, m, t, step)),
            Err(e) => {
                rejected.push((step, ab));
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.expect("caller checked for a reducible edge"))
}

/// Colours classes: final K4 classes get 0..4, then removed classes in
/// reverse order take the smallest colour free among their already
/// coloured diameter neighbours.
fn color_classes(
    map: &PlanarMap,
    iso: &SelfDualIso,
    forest: &MergeForest,
) -> Result<Vec<u8>, ColoringError> {
    let n = map.vertex_count();
    let d = diameter_graph(map, iso);
    let adj = d.adjacency_lists();
    let mut class_color: Vec<Option<u8>> = vec![None; n];
    for (c, &r) in forest.final_reps.iter().enumerate() {
        class_color[forest.find(r)] = Some(c as u8);
    }
    let class_of = |v: Vertex| forest.find(v);
    for &r in forest.removed.iter().rev() {
        let root = class_of(r);
        let mut used = [false; 4];
        for u in (0..n).filter(|&u| class_of(u) == root) {
            for &w in &adj[u] {
                if let Some(c) = class_color[class_of(w)] {
                    used[c as usize] = true;
                }
            }
        }
        match (0..4u8).find(|&c| !used[c as usize]) {
            Some(c) => class_color[root] = Some(c),
            None => return fail(format!("no colour left for removed class of {r}")),
        }
    }
    let colors: Option<Vec<u8>> = (0..n).map(|v| class_color[class_of(v)]).collect();
    let Some(colors) = colors else {
        return fail("some vertex was never coloured");
    };
    if let Some(&(a, b)) = d.edges.iter().find(|&&(a, b)| colors[a] == colors[b]) {
        return fail(format!("diameter edge {a}-{b} is monochromatic"));
    }
    Ok(colors)
}

/// Whether `graph` has a proper colouring with `k` colours, by exhaustive
/// backtracking over vertices in order of decreasing degree.
pub fn chromatic_oracle(graph: &DiameterGraph, k: usize) -> bool {
    let adj = graph.adjacency_lists();
    let mut order: Vec<Vertex> = (0..graph.n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].len()), v));
    let mut color = vec![usize::MAX; graph.n];
    fn go(i: usize, order: &[Vertex], adj: &[Vec<Vertex>], color: &mut [usize], k: usize) -> bool {
        let Some(&v) = order.get(i) else {
            return true;
        };
        // New colours are tried only up to one past the largest in use.
        let used_max = order[..i].iter().map(|&u| color[u] + 1).max().unwrap_or(0);
        for c in 0..k.min(used_max + 1) {
            if adj[v].iter().all(|&u| color[u] != c) {
                color[v] = c;
                if go(i + 1, order, adj, color, k) {
                    return true;
                }
                color[v] = usize::MAX;
            }
        }
        false
    }
    go(0, &order, &adj, &mut color, k)
}

/// Vertices of a regular tetrahedron with unit side, centred at the origin.
pub fn tetrahedron_coords() -> [[f64; 3]; 4] {
    let s = 0.5 * std::f64::consts::FRAC_1_SQRT_2;
    [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]]
}

/// Sends each vertex to the tetrahedron vertex of its colour.
pub fn tetrahedral_mapping(colors: &[u8]) -> Vec<[f64; 3]> {
    let t = tetrahedron_coords();
    colors.iter().map(|&c| t[c as usize]).collect()
}
