//! Strongly involutive self-dualities.
//!
//! A self-duality assigns each vertex `v` a face `tau(v)` so that adjacency
//! of vertices matches adjacency of faces. It is strongly involutive when no
//! vertex lies on its own face and `u` lies on `tau(v)` exactly when `v`
//! lies on `tau(u)`. Candidate faces per vertex are pruned by arc
//! consistency, then a backtracking search with forward checking enumerates
//! every solution.

use std::collections::VecDeque;

use thiserror::Error;

use crate::planar_map::{FaceId, PlanarMap, Vertex};

/// `tau[v]` is the face assigned to vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SelfDualIso {
    pub tau: Vec<FaceId>,
}

/// Graph on the map's vertices joining `u` and `v` whenever `v` lies on
/// `tau(u)`. Edges are stored as sorted `(min, max)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiameterGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl DiameterGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut edges: Vec<_> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        edges.dedup();
        DiameterGraph { n, edges }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("tau has {got} entries for {n} vertices")]
    WrongLength { n: usize, got: usize },
    #[error("map has {faces} faces but {vertices} vertices")]
    FaceCount { vertices: usize, faces: usize },
    #[error("tau is not a bijection onto the faces")]
    NotBijective,
    #[error("vertex {0} has degree different from the size of its face")]
    DegreeMismatch(Vertex),
    #[error("adjacency of {0} and {1} is not mirrored by their faces")]
    AdjacencyMismatch(Vertex, Vertex),
    #[error("vertex {0} lies on its own face")]
    FixedPoint(Vertex),
    #[error("{0} lies on tau({1}) but {1} does not lie on tau({0})")]
    NotInvolutive(Vertex, Vertex),
}

/// Independent check of every defining property of a strongly involutive
/// self-duality.
pub fn certify(map: &PlanarMap, iso: &SelfDualIso) -> Result<(), CertifyError> {
    let n = map.vertex_count();
    let tau = &iso.tau;
    if tau.len() != n {
        return Err(CertifyError::WrongLength { n, got: tau.len() });
    }
    if map.face_count() != n {
        return Err(CertifyError::FaceCount {
            vertices: n,
            faces: map.face_count(),
        });
    }
    let mut hit = vec![false; n];
    for &f in tau {
        if f >= n || hit[f] {
            return Err(CertifyError::NotBijective);
        }
        hit[f] = true;
    }
    let deg = map.degrees();
    for v in 0..n {
        if deg[v] != map.face(tau[v]).size() {
            return Err(CertifyError::DegreeMismatch(v));
        }
        if map.face(tau[v]).contains_vertex(v) {
            return Err(CertifyError::FixedPoint(v));
        }
    }
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            if map.has_edge(u, v) != map.faces_adjacent(tau[u], tau[v]) {
                return Err(CertifyError::AdjacencyMismatch(u, v));
            }
            if map.face(tau[v]).contains_vertex(u) != map.face(tau[u]).contains_vertex(v) {
                return Err(CertifyError::NotInvolutive(u, v));
            }
        }
    }
    Ok(())
}

/// Builds the diameter graph of a certified self-duality.
pub fn diameter_graph(map: &PlanarMap, iso: &SelfDualIso) -> DiameterGraph {
    let mut edges = Vec::new();
    for (u, &f) in iso.tau.iter().enumerate() {
        for &v in &map.face(f).boundary_vertices {
            if u < v {
                edges.push((u, v));
            } else if v < u {
                edges.push((v, u));
            }
        }
    }
    DiameterGraph::new(map.vertex_count(), edges)
}

/// Fixed-width bit rows, one per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitRows {
    words: usize,
    bits: Vec<u64>,
}

impl BitRows {
    fn new(rows: usize, width: usize) -> Self {
        let words = width.div_ceil(64).max(1);
        BitRows {
            words,
            bits: vec![0; rows * words],
        }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    fn set(&mut self, r: usize, i: usize) {
        self.bits[r * self.words + i / 64] |= 1 << (i % 64);
    }

    fn get(&self, r: usize, i: usize) -> bool {
        self.bits[r * self.words + i / 64] >> (i % 64) & 1 == 1
    }

    fn count(&self, r: usize) -> usize {
        self.row(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    fn members(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &w) in self.row(r).iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(k * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }
}

/// Static facts about a map used by propagation and search.
struct Tables {
    n: usize,
    faces: usize,
    neighbors: Vec<Vec<Vertex>>,
    is_edge: Vec<bool>,
    /// Faces sharing an edge with each face.
    face_adj: BitRows,
    /// Faces containing each vertex.
    faces_at: BitRows,
    /// Vertices on each face.
    on_face: BitRows,
}

impl Tables {
    fn new(map: &PlanarMap) -> Self {
        let n = map.vertex_count();
        let nf = map.face_count();
        let mut neighbors = map.adjacency_lists();
        for l in &mut neighbors {
            l.sort_unstable();
            l.dedup();
        }
        let mut is_edge = vec![false; n * n];
        for (u, l) in neighbors.iter().enumerate() {
            for &v in l {
                is_edge[u * n + v] = true;
            }
        }
        let mut face_adj = BitRows::new(nf, nf);
        let mut faces_at = BitRows::new(n, nf);
        let mut on_face = BitRows::new(nf, n);
        for face in map.faces() {
            for &d in &face.darts {
                let other = map.face_of(map.twin(d));
                face_adj.set(face.id, other);
                faces_at.set(map.origin(d), face.id);
                on_face.set(face.id, map.origin(d));
            }
        }
        Tables {
            n,
            faces: nf,
            neighbors,
            is_edge,
            face_adj,
            faces_at,
            on_face,
        }
    }
}

/// Candidate faces `F_v` per vertex plus the arcs still to revise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateDomains {
    sets: BitRows,
    pub worklist: VecDeque<(Vertex, Vertex)>,
}

impl CandidateDomains {
    pub fn domain(&self, v: Vertex) -> Vec<FaceId> {
        self.sets.members(v)
    }

    pub fn contains(&self, v: Vertex, f: FaceId) -> bool {
        self.sets.get(v, f)
    }

    pub fn remove(&mut self, v: Vertex, f: FaceId) {
        self.sets.bits[v * self.sets.words + f / 64] &= !(1 << (f % 64));
    }

    pub fn any_empty(&self) -> bool {
        (0..self.sets.bits.len() / self.sets.words).any(|v| self.sets.count(v) == 0)
    }
}

/// `F_v` = faces whose size equals `deg(v)` and that avoid `v`; every arc
/// `(u, v)` with `uv` an edge is queued.
pub fn init_domains(map: &PlanarMap) -> CandidateDomains {
    let n = map.vertex_count();
    let nf = map.face_count();
    let deg = map.degrees();
    let mut sets = BitRows::new(n, nf);
    for v in 0..n {
        for f in map.faces() {
            if f.size() == deg[v] && !f.contains_vertex(v) {
                sets.set(v, f.id);
            }
        }
    }
    let mut worklist = VecDeque::new();
    for u in 0..n {
        let mut nb = map.adjacency_lists()[u].clone();
        nb.sort_unstable();
        nb.dedup();
        for v in nb {
            worklist.push_back((u, v));
        }
    }
    CandidateDomains { sets, worklist }
}

fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

fn revise(t: &Tables, sets: &mut BitRows, u: Vertex, v: Vertex) -> bool {
    let mut changed = false;
    for f in sets.members(u) {
        if !intersects(t.face_adj.row(f), sets.row(v)) {
            sets.bits[u * sets.words + f / 64] &= !(1 << (f % 64));
            changed = true;
        }
    }
    changed
}

/// AC-3 over the edge constraints "adjacent vertices map to adjacent faces".
pub fn propagate_arc_consistency(mut domains: CandidateDomains, map: &PlanarMap) -> CandidateDomains {
    let t = Tables::new(map);
    run_ac3(&t, &mut domains);
    domains
}

fn run_ac3(t: &Tables, domains: &mut CandidateDomains) {
    while let Some((u, v)) = domains.worklist.pop_front() {
        if revise(t, &mut domains.sets, u, v) {
            for &x in &t.neighbors[u] {
                domains.worklist.push_back((x, u));
            }
        }
    }
}

struct Search<'a> {
    t: &'a Tables,
    sets: BitRows,
    assigned: Vec<Option<FaceId>>,
    trail: Vec<(usize, u64)>,
    limit: usize,
    found: Vec<SelfDualIso>,
}

impl Search<'_> {
    /// Intersects row `r` with `mask` (or its complement), logging old words.
    fn restrict(&mut self, r: usize, mask: &[u64], keep_inside: bool) -> bool {
        let w = self.sets.words;
        let mut nonempty = false;
        for k in 0..w {
            let idx = r * w + k;
            let old = self.sets.bits[idx];
            let new = if keep_inside { old & mask[k] } else { old & !mask[k] };
            if new != old {
                self.trail.push((idx, old));
                self.sets.bits[idx] = new;
            }
            nonempty |= new != 0;
        }
        nonempty
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (idx, old) = self.trail.pop().unwrap();
            self.sets.bits[idx] = old;
        }
    }

    /// Forward checking after `v -> f`; false on a wipe-out.
    fn assign(&mut self, v: Vertex, f: FaceId) -> bool {
        let t = self.t;
        let w = self.sets.words;
        let mut single = vec![0u64; w];
        single[f / 64] |= 1 << (f % 64);
        if !self.restrict(v, &single.clone(), true) {
            return false;
        }
        let face_adj = t.face_adj.row(f).to_vec();
        let at_v = t.faces_at.row(v).to_vec();
        for u in 0..t.n {
            if u == v || self.assigned[u].is_some() {
                continue;
            }
            if !self.restrict(u, &single, false) {
                return false;
            }
            if !self.restrict(u, &face_adj, t.is_edge[u * t.n + v]) {
                return false;
            }
            if !self.restrict(u, &at_v, t.on_face.get(f, u)) {
                return false;
            }
        }
        true
    }

    fn pick_vertex(&self) -> Option<Vertex> {
        (0..self.t.n)
            .filter(|&v| self.assigned[v].is_none())
            .min_by_key(|&v| (self.sets.count(v), v))
    }

    fn run(&mut self) {
        if self.found.len() >= self.limit {
            return;
        }
        let Some(v) = self.pick_vertex() else {
            let tau = self.assigned.iter().map(|f| f.unwrap()).collect();
            self.found.push(SelfDualIso { tau });
            return;
        };
        for f in self.sets.members(v) {
            let mark = self.trail.len();
            if self.assign(v, f) {
                self.assigned[v] = Some(f);
                self.run();
                self.assigned[v] = None;
            }
            self.undo(mark);
            if self.found.len() >= self.limit {
                return;
            }
        }
    }
}

/// All strongly involutive self-dualities of `map` (at most `limit`), in
/// search order: smallest domain first, faces ascending.
pub fn search_strong_involutions(map: &PlanarMap, limit: Option<usize>) -> Vec<SelfDualIso> {
    let n = map.vertex_count();
    if map.face_count() != n || !map.is_simple() {
        return Vec::new();
    }
    let t = Tables::new(map);
    debug_assert_eq!(t.faces, n);
    let mut domains = init_domains(map);
    run_ac3(&t, &mut domains);
    if domains.any_empty() {
        return Vec::new();
    }
    let mut search = Search {
        t: &t,
        sets: domains.sets,
        assigned: vec![None; n],
        trail: Vec::new(),
        limit: limit.unwrap_or(usize::MAX),
        found: Vec::new(),
    };
    search.run();
    search.found
}

/// First self-duality in search order, if any.
pub fn find_strong_involution(map: &PlanarMap) -> Option<SelfDualIso> {
    search_strong_involutions(map, Some(1)).into_iter().next()
}
