//! Planarity testing with embedding extraction.
//!
//! Biconnected blocks are embedded with the path-addition method of
//! Demoucron, Malgrange and Pertuiset: start from a cycle, then repeatedly
//! route a path of some fragment through a face that holds all of the
//! fragment's attachment vertices, forced placements first. Blocks are then
//! glued at cut vertices by concatenating their rotations.

use std::collections::VecDeque;

/// Counter-clockwise rotations of a planar embedding of the connected simple
/// graph `adj`, or `None` if the graph is not planar.
pub fn embed(adj: &[Vec<usize>]) -> Option<Vec<Vec<usize>>> {
    let n = adj.len();
    let mut rotations = vec![Vec::new(); n];
    if n <= 1 {
        return Some(rotations);
    }
    for block in biconnected_blocks(adj) {
        if block.len() == 1 {
            let (a, b) = block[0];
            rotations[a].push(b);
            rotations[b].push(a);
            continue;
        }
        let local = embed_biconnected(n, &block)?;
        for (v, rot) in local.into_iter().enumerate() {
            rotations[v].extend(rot);
        }
    }
    Some(rotations)
}

/// Edge sets of the biconnected components (Hopcroft-Tarjan).
fn biconnected_blocks(adj: &[Vec<usize>]) -> Vec<Vec<(usize, usize)>> {
    let n = adj.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut blocks = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // Iterative DFS: frames of (vertex, parent, next neighbour index).
        let mut stack = vec![(root, usize::MAX, 0usize)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
            if *idx < adj[v].len() {
                let w = adj[v][*idx];
                *idx += 1;
                if disc[w] == usize::MAX {
                    edge_stack.push((v, w));
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(e);
                            if e == (u, v) {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

struct Fragment {
    edges: Vec<(usize, usize)>,
    attachments: Vec<usize>,
    /// Interior vertices (empty for a single chord).
    interior: Vec<usize>,
}

fn embed_biconnected(n: usize, block: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    let mut adj = vec![Vec::new(); n];
    let mut in_block = vec![false; n];
    for &(a, b) in block {
        adj[a].push(b);
        adj[b].push(a);
        in_block[a] = true;
        in_block[b] = true;
    }
    let cycle = find_cycle(&adj, block[0].0)?;
    let mut embedded_v = vec![false; n];
    let mut embedded_e = vec![vec![false; n]; n];
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        embedded_v[a] = true;
        embedded_e[a][b] = true;
        embedded_e[b][a] = true;
    }
    let mut faces = vec![cycle.clone(), cycle.iter().rev().copied().collect::<Vec<_>>()];
    let mut placed = cycle.len();
    while placed < block.len() {
        let fragments = fragments(&adj, &in_block, &embedded_v, &embedded_e);
        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| frag.attachments.iter().all(|a| f.contains(a)))
                .map(|(i, _)| i)
                .collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_idx) = choice.expect("an unplaced edge leaves a fragment");
        let path = fragment_path(&adj, &fragments[fi], &embedded_v);
        for w in path.windows(2) {
            embedded_e[w[0]][w[1]] = true;
            embedded_e[w[1]][w[0]] = true;
        }
        for &v in &path {
            embedded_v[v] = true;
        }
        placed += path.len() - 1;
        let face = faces.swap_remove(face_idx);
        let (a, b) = split_face(&face, &path);
        faces.push(a);
        faces.push(b);
    }
    Some(rotations_from_faces(n, &faces))
}

fn find_cycle(adj: &[Vec<usize>], start: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    let mut stack = vec![(start, 0usize)];
    depth[start] = 0;
    while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
        if *idx < adj[v].len() {
            let w = adj[v][*idx];
            *idx += 1;
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                stack.push((w, 0));
            } else if w != parent[v] && depth[w] < depth[v] {
                let mut cycle = vec![v];
                let mut x = v;
                while x != w {
                    x = parent[x];
                    cycle.push(x);
                }
                return Some(cycle);
            }
        } else {
            stack.pop();
        }
    }
    None
}

fn fragments(
    adj: &[Vec<usize>],
    in_block: &[bool],
    embedded_v: &[bool],
    embedded_e: &[Vec<bool>],
) -> Vec<Fragment> {
    let n = adj.len();
    let mut out = Vec::new();
    for a in 0..n {
        if !embedded_v[a] {
            continue;
        }
        for &b in &adj[a] {
            if a < b && embedded_v[b] && !embedded_e[a][b] {
                out.push(Fragment {
                    edges: vec![(a, b)],
                    attachments: vec![a, b],
                    interior: Vec::new(),
                });
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    for s in 0..n {
        if !in_block[s] || embedded_v[s] || comp[s] != usize::MAX {
            continue;
        }
        let id = s;
        let mut interior = vec![s];
        let mut attachments = Vec::new();
        let mut edges = Vec::new();
        comp[s] = id;
        let mut i = 0;
        while i < interior.len() {
            let v = interior[i];
            i += 1;
            for &w in &adj[v] {
                if embedded_v[w] {
                    edges.push((v, w));
                    if !attachments.contains(&w) {
                        attachments.push(w);
                    }
                } else {
                    if v < w {
                        edges.push((v, w));
                    }
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        interior.push(w);
                    }
                }
            }
        }
        attachments.sort_unstable();
        out.push(Fragment {
            edges,
            attachments,
            interior,
        });
    }
    out
}

/// A path through the fragment joining two distinct attachment vertices.
fn fragment_path(adj: &[Vec<usize>], frag: &Fragment, embedded_v: &[bool]) -> Vec<usize> {
    if frag.interior.is_empty() {
        let (a, b) = frag.edges[0];
        return vec![a, b];
    }
    let n = adj.len();
    let start = frag.attachments[0];
    let mut in_frag = vec![false; n];
    for &v in &frag.interior {
        in_frag[v] = true;
    }
    let mut prev = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for &w in &adj[start] {
        if in_frag[w] && prev[w] == usize::MAX {
            prev[w] = start;
            queue.push_back(w);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if embedded_v[w] && w != start {
                let mut path = vec![w, v];
                let mut x = v;
                while prev[x] != start {
                    x = prev[x];
                    path.push(x);
                }
                path.push(start);
                path.reverse();
                return path;
            }
            if in_frag[w] && prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragment of a biconnected graph has two attachments")
}

fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let k = face.len();
    let a = *path.first().unwrap();
    let b = *path.last().unwrap();
    let i = face.iter().position(|&x| x == a).unwrap();
    let j = face.iter().position(|&x| x == b).unwrap();
    let inner = &path[1..path.len() - 1];
    let mut first = Vec::new();
    let mut p = i;
    loop {
        first.push(face[p]);
        if p == j {
            break;
        }
        p = (p + 1) % k;
    }
    first.extend(inner.iter().rev());
    let mut second = Vec::new();
    let mut p = j;
    loop {
        second.push(face[p]);
        if p == i {
            break;
        }
        p = (p + 1) % k;
    }
    second.extend(inner.iter());
    (first, second)
}

/// Face walks `(.., p, v, s, ..)` mean `s` follows `p` counter-clockwise at `v`.
fn rotations_from_faces(n: usize, faces: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut succ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for f in faces {
        let k = f.len();
        for i in 0..k {
            let p = f[(i + k - 1) % k];
            let v = f[i];
            let s = f[(i + 1) % k];
            succ[v].push((p, s));
        }
    }
    succ.into_iter()
        .map(|pairs| {
            if pairs.is_empty() {
                return Vec::new();
            }
            let mut rot = vec![pairs[0].0];
            let mut cur = pairs[0].0;
            loop {
                let nxt = pairs.iter().find(|&&(p, _)| p == cur).unwrap().1;
                if nxt == rot[0] {
                    break;
                }
                rot.push(nxt);
                cur = nxt;
            }
            rot
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar_map::PlanarMap;

    fn complete(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|v| (0..n).filter(|&w| w != v).collect()).collect()
    }

    fn from_edges(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    #[test]
    fn complete_graphs() {
        let k4 = embed(&complete(4)).unwrap();
        let m = PlanarMap::from_rotations(&k4).unwrap();
        assert_eq!(m.face_count(), 4);
        assert!(embed(&complete(5)).is_none());
    }

    #[test]
    fn k33_is_not_planar() {
        let mut edges = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                edges.push((a, b));
            }
        }
        assert!(embed(&from_edges(6, &edges)).is_none());
        edges.pop();
        let rot = embed(&from_edges(6, &edges)).unwrap();
        PlanarMap::from_rotations(&rot).unwrap();
    }

    #[test]
    fn cut_vertices_and_trees() {
        // Two triangles sharing vertex 2, plus a pendant path.
        let adj = from_edges(7, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2), (4, 5), (5, 6)]);
        let rot = embed(&adj).unwrap();
        let m = PlanarMap::from_rotations(&rot).unwrap();
        assert_eq!(m.face_count(), 3);
        let path = from_edges(3, &[(0, 1), (1, 2)]);
        PlanarMap::from_rotations(&embed(&path).unwrap()).unwrap();
    }

    #[test]
    fn petersen_is_not_planar() {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        assert!(embed(&from_edges(10, &edges)).is_none());
    }

    #[test]
    fn icosahedron_embeds() {
        // Icosahedron: maximal planar, 12 vertices, 30 edges.
        let edges = [
            (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (2, 3), (3, 4), (4, 5), (5, 1),
            (1, 6), (2, 6), (2, 7), (3, 7), (3, 8), (4, 8), (4, 9), (5, 9), (5, 10), (1, 10),
            (6, 7), (7, 8), (8, 9), (9, 10), (10, 6), (11, 6), (11, 7), (11, 8), (11, 9), (11, 10),
        ];
        let rot = embed(&from_edges(12, &edges)).unwrap();
        let m = PlanarMap::from_rotations(&rot).unwrap();
        assert_eq!(m.face_count(), 20);
        assert!(m.faces().iter().all(|f| f.size() == 3));
    }
}
