//! Dart-based combinatorial maps on the sphere.
//!
//! A map is stored as three arrays over darts (directed half-edges):
//! `twin` pairs the two halves of an edge, `next` is the counter-clockwise
//! rotation around the origin vertex and `origin` names that vertex. Faces
//! are the orbits of `d -> next[twin[d]]` and are derived lazily.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::canon;

pub type Vertex = usize;
pub type Dart = usize;
pub type FaceId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("invalid map: {0}")]
    InvalidMap(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, MapError> {
    Err(MapError::InvalidMap(msg.into()))
}

/// A face as a cyclic sequence of darts; `boundary_vertices[i]` is the origin
/// of `darts[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: FaceId,
    pub darts: Vec<Dart>,
    pub boundary_vertices: Vec<Vertex>,
}

impl Face {
    /// Number of edges on the boundary walk.
    pub fn size(&self) -> usize {
        self.darts.len()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.boundary_vertices.contains(&v)
    }
}

#[derive(Debug, Clone)]
struct FaceTable {
    faces: Vec<Face>,
    face_of_dart: Vec<FaceId>,
}

/// Rotation system of a connected planar multigraph.
#[derive(Clone)]
pub struct PlanarMap {
    vertex_count: usize,
    twin: Vec<Dart>,
    next: Vec<Dart>,
    origin: Vec<Vertex>,
    faces: OnceLock<FaceTable>,
}

impl fmt::Debug for PlanarMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlanarMap")
            .field("vertex_count", &self.vertex_count)
            .field("rotations", &self.rotations())
            .finish()
    }
}

impl PartialEq for PlanarMap {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count
            && self.twin == other.twin
            && self.next == other.next
            && self.origin == other.origin
    }
}

impl Eq for PlanarMap {}

impl PlanarMap {
    /// Builds a map from raw dart permutations and checks every invariant,
    /// including connectivity and the Euler formula.
    pub fn from_darts(
        vertex_count: usize,
        twin: Vec<Dart>,
        next: Vec<Dart>,
        origin: Vec<Vertex>,
    ) -> Result<Self, MapError> {
        let darts = twin.len();
        if vertex_count == 0 {
            return invalid("map has no vertices");
        }
        if next.len() != darts || origin.len() != darts {
            return invalid("dart arrays differ in length");
        }
        if darts == 0 && vertex_count != 1 {
            return invalid("edgeless map must have exactly one vertex");
        }
        for d in 0..darts {
            let t = twin[d];
            if t >= darts || t == d || twin[t] != d {
                return invalid(format!("twin is not a fixed-point-free involution at dart {d}"));
            }
            if origin[d] >= vertex_count {
                return invalid(format!("dart {d} has origin {} out of range", origin[d]));
            }
        }
        let mut seen = vec![false; darts];
        for &d in &next {
            if d >= darts || seen[d] {
                return invalid("next is not a permutation");
            }
            seen[d] = true;
        }
        // Each next-orbit must be exactly the set of darts of one vertex.
        let mut vertex_seen = vec![false; vertex_count];
        let mut visited = vec![false; darts];
        for start in 0..darts {
            if visited[start] {
                continue;
            }
            let v = origin[start];
            if vertex_seen[v] {
                return invalid(format!("darts of vertex {v} split across several rotations"));
            }
            vertex_seen[v] = true;
            let mut d = start;
            loop {
                if origin[d] != v {
                    return invalid(format!("rotation of vertex {v} contains a foreign dart"));
                }
                visited[d] = true;
                d = next[d];
                if d == start {
                    break;
                }
            }
        }
        if darts > 0 && vertex_seen.iter().any(|s| !s) {
            return invalid("isolated vertex in a map with edges");
        }
        let map = PlanarMap {
            vertex_count,
            twin,
            next,
            origin,
            faces: OnceLock::new(),
        };
        if !map.is_connected() {
            return invalid("map is not connected");
        }
        let chi = map.vertex_count as i64 - map.edge_count() as i64 + map.face_count() as i64;
        if chi != 2 {
            return invalid(format!("Euler characteristic {chi}, expected 2"));
        }
        Ok(map)
    }

    /// Builds a simple map from counter-clockwise neighbour lists.
    ///
    /// Each edge `{u, v}` must appear once in the list of `u` and once in the
    /// list of `v`.
    pub fn from_rotations(rotations: &[Vec<Vertex>]) -> Result<Self, MapError> {
        let n = rotations.len();
        let mut first = Vec::with_capacity(n + 1);
        let mut total = 0;
        for rot in rotations {
            first.push(total);
            total += rot.len();
        }
        first.push(total);
        let mut twin = vec![usize::MAX; total];
        let mut next = vec![0; total];
        let mut origin = vec![0; total];
        for (u, rot) in rotations.iter().enumerate() {
            let k = rot.len();
            for (i, &v) in rot.iter().enumerate() {
                let d = first[u] + i;
                origin[d] = u;
                next[d] = first[u] + (i + 1) % k;
                if v >= n {
                    return invalid(format!("neighbour {v} of vertex {u} out of range"));
                }
                if v == u {
                    return invalid(format!("loop at vertex {u}"));
                }
                let back: Vec<usize> = rotations[v]
                    .iter()
                    .enumerate()
                    .filter(|&(_, &w)| w == u)
                    .map(|(j, _)| j)
                    .collect();
                if back.len() != 1 || rot.iter().filter(|&&w| w == v).count() != 1 {
                    return invalid(format!("edge {u}-{v} is not listed exactly once at each end"));
                }
                twin[d] = first[v] + back[0];
            }
        }
        PlanarMap::from_darts(n, twin, next, origin)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dart_count(&self) -> usize {
        self.twin.len()
    }

    pub fn edge_count(&self) -> usize {
        self.twin.len() / 2
    }

    pub fn face_count(&self) -> usize {
        self.face_table().faces.len()
    }

    pub fn twin(&self, d: Dart) -> Dart {
        self.twin[d]
    }

    /// Next dart counter-clockwise around `origin(d)`.
    pub fn next(&self, d: Dart) -> Dart {
        self.next[d]
    }

    pub fn origin(&self, d: Dart) -> Vertex {
        self.origin[d]
    }

    /// Head vertex of dart `d`.
    pub fn target(&self, d: Dart) -> Vertex {
        self.origin[self.twin[d]]
    }

    /// Successor of `d` along the boundary of its face.
    pub fn face_next(&self, d: Dart) -> Dart {
        self.next[self.twin[d]]
    }

    pub fn twins(&self) -> &[Dart] {
        &self.twin
    }

    pub fn nexts(&self) -> &[Dart] {
        &self.next
    }

    pub fn origins(&self) -> &[Vertex] {
        &self.origin
    }

    /// Darts leaving `v`, in counter-clockwise order starting from its
    /// lowest-numbered dart.
    pub fn darts_at(&self, v: Vertex) -> Vec<Dart> {
        let Some(start) = self.origin.iter().position(|&o| o == v) else {
            return Vec::new();
        };
        let mut out = vec![start];
        let mut d = self.next[start];
        while d != start {
            out.push(d);
            d = self.next[d];
        }
        out
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.origin.iter().filter(|&&o| o == v).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &o in &self.origin {
            deg[o] += 1;
        }
        deg
    }

    /// Counter-clockwise neighbour lists, one per vertex.
    pub fn rotations(&self) -> Vec<Vec<Vertex>> {
        (0..self.vertex_count)
            .map(|v| self.darts_at(v).into_iter().map(|d| self.target(d)).collect())
            .collect()
    }

    /// Unordered edges `(min, max)`, one entry per edge (parallel edges repeat).
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out: Vec<_> = (0..self.dart_count())
            .filter(|&d| d < self.twin[d])
            .map(|d| {
                let (a, b) = (self.origin[d], self.target(d));
                (a.min(b), a.max(b))
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        (0..self.dart_count()).any(|d| self.origin[d] == u && self.target(d) == v)
    }

    /// Dart from `u` to `v`, if any.
    pub fn find_dart(&self, u: Vertex, v: Vertex) -> Option<Dart> {
        (0..self.dart_count()).find(|&d| self.origin[d] == u && self.target(d) == v)
    }

    /// No loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::new();
        for d in 0..self.dart_count() {
            let (a, b) = (self.origin[d], self.target(d));
            if a == b || !seen.insert((a, b)) {
                return false;
            }
        }
        true
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count];
        let adj = self.adjacency_lists();
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertex_count
    }

    /// Neighbour lists without rotation information (parallel edges repeat).
    pub fn adjacency_lists(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for d in 0..self.dart_count() {
            adj[self.origin[d]].push(self.target(d));
        }
        adj
    }

    fn face_table(&self) -> &FaceTable {
        self.faces.get_or_init(|| {
            let darts = self.dart_count();
            let mut face_of_dart = vec![usize::MAX; darts];
            let mut faces = Vec::new();
            for start in 0..darts {
                if face_of_dart[start] != usize::MAX {
                    continue;
                }
                let id = faces.len();
                let mut walk = Vec::new();
                let mut d = start;
                loop {
                    face_of_dart[d] = id;
                    walk.push(d);
                    d = self.face_next(d);
                    if d == start {
                        break;
                    }
                }
                let boundary_vertices = walk.iter().map(|&d| self.origin[d]).collect();
                faces.push(Face {
                    id,
                    darts: walk,
                    boundary_vertices,
                });
            }
            if darts == 0 {
                // A single vertex on the sphere has one face.
                faces.push(Face {
                    id: 0,
                    darts: Vec::new(),
                    boundary_vertices: Vec::new(),
                });
            }
            FaceTable {
                faces,
                face_of_dart,
            }
        })
    }

    /// Faces ordered by their lowest dart.
    pub fn faces(&self) -> &[Face] {
        &self.face_table().faces
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.face_table().faces[id]
    }

    /// Face to the left of dart `d` in the face-walk orientation.
    pub fn face_of(&self, d: Dart) -> FaceId {
        self.face_table().face_of_dart[d]
    }

    /// Faces separated by the edge of dart `d`: `(face_of(d), face_of(twin(d)))`.
    pub fn faces_of_edge(&self, d: Dart) -> (FaceId, FaceId) {
        (self.face_of(d), self.face_of(self.twin[d]))
    }

    /// Whether faces `f` and `g` share at least one edge.
    pub fn faces_adjacent(&self, f: FaceId, g: FaceId) -> bool {
        self.face(f)
            .darts
            .iter()
            .any(|&d| self.face_of(self.twin[d]) == g)
    }

    /// Dual map: vertex `i` of the result is face `i` of `self`, and dart
    /// `d` keeps its index.
    pub fn dual(&self) -> PlanarMap {
        let table = self.face_table();
        let darts = self.dart_count();
        let origin = table.face_of_dart.clone();
        let next = (0..darts).map(|d| self.face_next(d)).collect();
        PlanarMap::from_darts(table.faces.len(), self.twin.clone(), next, origin)
            .expect("dual of a valid map is valid")
    }

    /// Mirror image: every rotation reversed.
    pub fn reflect(&self) -> PlanarMap {
        let mut prev = vec![0; self.dart_count()];
        for (d, &nx) in self.next.iter().enumerate() {
            prev[nx] = d;
        }
        PlanarMap::from_darts(self.vertex_count, self.twin.clone(), prev, self.origin.clone())
            .expect("reflection of a valid map is valid")
    }

    /// True iff the underlying graph has at least four vertices and stays
    /// connected after deleting any two of them.
    pub fn is_three_connected(&self) -> bool {
        is_three_connected_graph(&self.adjacency_lists())
    }

    /// Isomorphism key of the underlying (multi)graph.
    pub fn canonical_form(&self) -> Vec<u8> {
        canon::canonical_form(self.vertex_count, &self.edges())
    }
}

/// 3-connectivity of a graph given by neighbour lists, by deleting every pair
/// of vertices and scanning what remains.
pub fn is_three_connected_graph(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    if n < 4 {
        return false;
    }
    let mut removed = vec![false; n];
    let mut seen = vec![false; n];
    let mut stack = Vec::with_capacity(n);
    let connected_without = |removed: &[bool], seen: &mut Vec<bool>, stack: &mut Vec<usize>| {
        seen.iter_mut().for_each(|s| *s = false);
        let Some(start) = (0..n).find(|&v| !removed[v]) else {
            return true;
        };
        stack.clear();
        stack.push(start);
        seen[start] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !removed[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n - removed.iter().filter(|&&r| r).count()
    };
    if !connected_without(&removed, &mut seen, &mut stack) {
        return false;
    }
    for a in 0..n {
        removed[a] = true;
        for b in a + 1..n {
            removed[b] = true;
            let ok = connected_without(&removed, &mut seen, &mut stack);
            removed[b] = false;
            if !ok {
                return false;
            }
        }
        removed[a] = false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn k4_has_four_triangles() {
        let k4 = families::tetrahedron();
        assert_eq!(k4.face_count(), 4);
        assert!(k4.faces().iter().all(|f| f.size() == 3));
        assert_eq!(k4.edge_count(), 6);
    }

    #[test]
    fn five_wheel_faces() {
        let w = families::wheel(5);
        let mut sizes: Vec<_> = w.faces().iter().map(Face::size).collect();
        sizes.sort();
        assert_eq!(sizes, vec![3, 3, 3, 3, 3, 5]);
        assert_eq!(w.vertex_count() + w.face_count(), w.edge_count() + 2);
    }

    #[test]
    fn every_dart_in_one_face() {
        let m = families::cube();
        let mut count = vec![0; m.dart_count()];
        for f in m.faces() {
            for &d in &f.darts {
                count[d] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 1));
        let total: usize = m.faces().iter().map(Face::size).sum();
        assert_eq!(total, m.dart_count());
    }

    #[test]
    fn duals_of_classic_solids() {
        let k4 = families::tetrahedron();
        assert_eq!(k4.dual().canonical_form(), k4.canonical_form());
        let w = families::wheel(5);
        assert_eq!(w.dual().canonical_form(), w.canonical_form());
        let cube = families::cube();
        let oct = cube.dual();
        assert_eq!(oct.vertex_count(), 6);
        assert_eq!(oct.face_count(), 8);
        assert_eq!(oct.edge_count(), 12);
        assert!(oct.degrees().iter().all(|&d| d == 4));
        assert_eq!(oct.dual().canonical_form(), cube.canonical_form());
    }

    #[test]
    fn dual_of_dual_is_the_same_map() {
        let m = families::prism(5);
        let dd = m.dual().dual();
        assert_eq!(dd.twins(), m.twins());
        assert_eq!(dd.nexts(), m.nexts());
    }

    #[test]
    fn three_connectivity() {
        assert!(families::tetrahedron().is_three_connected());
        assert!(families::cube().is_three_connected());
        // Square with a chord path 0-4-2: {0, 2} separates 4 from 1 and 3.
        let two_cut = PlanarMap::from_rotations(&[
            vec![1, 4, 3],
            vec![2, 0],
            vec![3, 4, 1],
            vec![0, 2],
            vec![2, 0],
        ])
        .unwrap();
        assert!(!two_cut.is_three_connected());
        let tri = PlanarMap::from_rotations(&[vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap();
        assert!(!tri.is_three_connected());
    }

    #[test]
    fn rejects_broken_permutations() {
        assert!(PlanarMap::from_darts(2, vec![0, 1], vec![0, 1], vec![0, 1]).is_err());
        // Asymmetric neighbour lists.
        assert!(PlanarMap::from_rotations(&[vec![1, 2], vec![0], vec![1]]).is_err());
        // Disconnected: two separate edges.
        assert!(PlanarMap::from_darts(4, vec![1, 0, 3, 2], vec![0, 1, 2, 3], vec![0, 1, 2, 3]).is_err());
        // K4 with a twisted rotation lives on the torus, not the sphere.
        let torus = PlanarMap::from_rotations(&[
            vec![1, 2, 3],
            vec![0, 2, 3],
            vec![0, 1, 3],
            vec![0, 1, 2],
        ]);
        assert!(torus.is_err());
    }

    #[test]
    fn reflection_keeps_graph() {
        let m = families::wheel(7);
        let r = m.reflect();
        assert_eq!(r.canonical_form(), m.canonical_form());
        assert_eq!(r.face_count(), m.face_count());
    }
}
