//! Enumeration of 3-connected planar graphs with `n` vertices and `2n - 2`
//! edges, the candidate pool for self-duality.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rayon::prelude::*;
use thiserror::Error;

use crate::codec::{self, CodecError};
use crate::planar_map::PlanarMap;
use crate::planarity;

/// Largest `n` accepted by the internal generator.
pub const INTERNAL_MAX_N: usize = 9;

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("internal generation is capped at n = {INTERNAL_MAX_N} (got n = {0}); use a planar_code file")]
    SizeCap(usize),
    #[error("n must be at least 4 (got {0})")]
    TooSmall(usize),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// A labelled simple graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl CandidateGraph {
    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn masks(&self) -> Vec<u32> {
        let mut m = vec![0u32; self.n];
        for &(a, b) in &self.edges {
            m[a] |= 1 << b;
            m[b] |= 1 << a;
        }
        m
    }
}

/// Where census input comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Internal,
    File(PathBuf),
}

struct Enumerator {
    n: usize,
    target: usize,
    pairs: Vec<(usize, usize)>,
    /// `remaining[k][v]`: pairs at index `>= k` touching `v`.
    remaining: Vec<Vec<usize>>,
}

impl Enumerator {
    fn new(n: usize) -> Self {
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                pairs.push((a, b));
            }
        }
        let mut remaining = vec![vec![0; n]; pairs.len() + 1];
        for k in (0..pairs.len()).rev() {
            remaining[k] = remaining[k + 1].clone();
            remaining[k][pairs[k].0] += 1;
            remaining[k][pairs[k].1] += 1;
        }
        Enumerator {
            n,
            target: 2 * n - 2,
            pairs,
            remaining,
        }
    }

    fn feasible(&self, k: usize, chosen: usize, deg: &[usize]) -> bool {
        if chosen > self.target || chosen + (self.pairs.len() - k) < self.target {
            return false;
        }
        let mut deficit = 0;
        for v in 0..self.n {
            let need = 3usize.saturating_sub(deg[v]);
            if need > self.remaining[k][v] {
                return false;
            }
            deficit += need;
        }
        deficit <= 2 * (self.target - chosen)
    }

    fn run(
        &self,
        k: usize,
        chosen: &mut Vec<usize>,
        deg: &mut [usize],
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if !self.feasible(k, chosen.len(), deg) {
            return;
        }
        if chosen.len() == self.target {
            visit(chosen);
            return;
        }
        let (a, b) = self.pairs[k];
        chosen.push(k);
        deg[a] += 1;
        deg[b] += 1;
        self.run(k + 1, chosen, deg, visit);
        deg[a] -= 1;
        deg[b] -= 1;
        chosen.pop();
        self.run(k + 1, chosen, deg, visit);
    }

    fn graph(&self, chosen: &[usize]) -> CandidateGraph {
        CandidateGraph {
            n: self.n,
            edges: chosen.iter().map(|&k| self.pairs[k]).collect(),
        }
    }
}

fn check_size(n: usize) -> Result<(), GeneratorError> {
    if n < 4 {
        return Err(GeneratorError::TooSmall(n));
    }
    if n > INTERNAL_MAX_N {
        return Err(GeneratorError::SizeCap(n));
    }
    Ok(())
}

/// Every simple labelled graph on `0..n` with `2n - 2` edges and minimum
/// degree 3, each exactly once, in lexicographic order of edge sets
/// (edges included before excluded).
pub fn for_each_candidate(
    n: usize,
    mut visit: impl FnMut(&CandidateGraph),
) -> Result<(), GeneratorError> {
    check_size(n)?;
    let e = Enumerator::new(n);
    let mut deg = vec![0; n];
    e.run(0, &mut Vec::new(), &mut deg, &mut |chosen| visit(&e.graph(chosen)));
    Ok(())
}

/// Collected form of [`for_each_candidate`]; only sensible for small `n`.
pub fn enumerate_candidates(n: usize) -> Result<Vec<CandidateGraph>, GeneratorError> {
    let mut out = Vec::new();
    for_each_candidate(n, |g| out.push(g.clone()))?;
    Ok(out)
}

/// Rotation system of `g` if it is planar. For 3-connected graphs this is
/// the unique sphere embedding up to reflection.
pub fn planarity_embed(g: &CandidateGraph) -> Option<PlanarMap> {
    let rot = planarity::embed(&g.adjacency_lists())?;
    Some(PlanarMap::from_rotations(&rot).expect("planarity embedding is a valid map"))
}

fn three_connected_masks(adj: &[u32]) -> bool {
    let n = adj.len();
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let connected = |alive: u32| -> bool {
        if alive == 0 {
            return true;
        }
        let mut seen = alive & alive.wrapping_neg();
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = adj[v] & alive & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen == alive
    };
    if !connected(full) {
        return false;
    }
    for a in 0..n {
        for b in a + 1..n {
            if !connected(full & !(1 << a) & !(1 << b)) {
                return false;
            }
        }
    }
    true
}

/// Canonical form and embedding of a candidate that passes both filters.
fn filter_candidate(g: &CandidateGraph) -> Option<(Vec<u8>, PlanarMap)> {
    if !three_connected_masks(&g.masks()) {
        return None;
    }
    let map = planarity_embed(g)?;
    Some((map.canonical_form(), map))
}

fn census_internal(n: usize) -> Result<Vec<PlanarMap>, GeneratorError> {
    check_size(n)?;
    let e = Enumerator::new(n);
    // Partition the search by the decisions on the first few vertex pairs.
    let split = 6.min(e.pairs.len());
    let mut prefixes = Vec::new();
    for mask in 0u32..(1 << split) {
        let chosen: Vec<usize> = (0..split).filter(|&k| mask & (1 << (split - 1 - k)) == 0).collect();
        prefixes.push(chosen);
    }
    let parts: Vec<BTreeMap<Vec<u8>, PlanarMap>> = prefixes
        .into_par_iter()
        .map(|prefix| {
            let mut deg = vec![0; n];
            for &k in &prefix {
                deg[e.pairs[k].0] += 1;
                deg[e.pairs[k].1] += 1;
            }
            let mut found = BTreeMap::new();
            let mut chosen = prefix;
            e.run(split, &mut chosen, &mut deg, &mut |c| {
                if let Some((key, map)) = filter_candidate(&e.graph(c)) {
                    found.entry(key).or_insert(map);
                }
            });
            found
        })
        .collect();
    let mut merged = BTreeMap::new();
    for part in parts {
        for (k, m) in part {
            merged.entry(k).or_insert(m);
        }
    }
    Ok(merged.into_values().collect())
}

/// Keeps simple 3-connected maps with `n` vertices and `2n - 2` edges,
/// deduplicated by canonical form and sorted by it.
pub fn census_from_maps(n: usize, maps: Vec<PlanarMap>) -> Vec<PlanarMap> {
    let keyed: Vec<(Vec<u8>, PlanarMap)> = maps
        .into_par_iter()
        .filter(|m| {
            m.vertex_count() == n
                && m.edge_count() == 2 * n - 2
                && m.is_simple()
                && m.is_three_connected()
        })
        .map(|m| (m.canonical_form(), m))
        .collect();
    let mut merged = BTreeMap::new();
    for (k, m) in keyed {
        merged.entry(k).or_insert(m);
    }
    merged.into_values().collect()
}

/// Deduplicated, canonically ordered pool of 3-connected planar maps with
/// `n` vertices and `2n - 2` edges.
pub fn census(n: usize, source: &Source) -> Result<Vec<PlanarMap>, GeneratorError> {
    if n < 4 {
        return Err(GeneratorError::TooSmall(n));
    }
    match source {
        Source::Internal => census_internal(n),
        Source::File(path) => {
            let bytes = std::fs::read(path).map_err(|source| GeneratorError::Io {
                path: path.clone(),
                source,
            })?;
            let maps = codec::read_planar_code(&bytes)?;
            Ok(census_from_maps(n, maps))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n4_yields_only_k4() {
        let all = enumerate_candidates(4).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].edges.len(), 6);
    }

    #[test]
    fn candidates_are_distinct_and_min_degree_three() {
        let all = enumerate_candidates(6).unwrap();
        let mut keys: Vec<_> = all.iter().map(|g| g.edges.clone()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), all.len());
        for g in &all {
            assert_eq!(g.edges.len(), 10);
            let mut deg = [0; 6];
            for &(a, b) in &g.edges {
                deg[a] += 1;
                deg[b] += 1;
            }
            assert!(deg.iter().all(|&d| d >= 3));
        }
    }

    #[test]
    fn labelled_count_matches_brute_force_at_n6() {
        // Independent count over all 10-subsets of the 15 pairs.
        let pairs: Vec<(usize, usize)> =
            (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).collect();
        let mut brute = 0;
        for mask in 0u32..(1 << 15) {
            if mask.count_ones() != 10 {
                continue;
            }
            let mut deg = [0; 6];
            for (k, &(a, b)) in pairs.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    deg[a] += 1;
                    deg[b] += 1;
                }
            }
            if deg.iter().all(|&d| d >= 3) {
                brute += 1;
            }
        }
        assert_eq!(enumerate_candidates(6).unwrap().len(), brute);
    }

    #[test]
    fn size_limits() {
        assert!(matches!(enumerate_candidates(10), Err(GeneratorError::SizeCap(10))));
        assert!(matches!(enumerate_candidates(3), Err(GeneratorError::TooSmall(3))));
    }

    #[test]
    fn k5_is_rejected_by_planarity() {
        let g = CandidateGraph {
            n: 5,
            edges: (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect(),
        };
        assert!(planarity_embed(&g).is_none());
    }

    #[test]
    fn mask_connectivity_agrees_with_map_test() {
        for g in enumerate_candidates(6).unwrap() {
            let masks = three_connected_masks(&g.masks());
            let lists = crate::planar_map::is_three_connected_graph(&g.adjacency_lists());
            assert_eq!(masks, lists);
        }
    }

    #[test]
    fn small_census_sizes() {
        assert_eq!(census(4, &Source::Internal).unwrap().len(), 1);
        // Square pyramid is the only 5-vertex polyhedron with 8 edges.
        assert_eq!(census(5, &Source::Internal).unwrap().len(), 1);
        for m in census(6, &Source::Internal).unwrap() {
            assert_eq!(m.edge_count(), 10);
            assert_eq!(m.face_count(), 6);
            assert!(m.is_three_connected());
        }
    }
}
