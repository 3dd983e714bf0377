//! Fixture tooling for polyhedral pools produced by an external generator.
//!
//! Isomorphism here uses rooted traversal codes, an approach unrelated to the
//! refinement-based canonical form in `reuleaux`, so each can check the
//! other.

use std::io::{BufRead, Write};

use reuleaux::codec::{CodecError, PlanarCodeReader, PLANAR_CODE_HEADER};
use reuleaux::planar_map::{Dart, PlanarMap};

/// Traversal code of `map` rooted at dart `root`, walking rotations
/// clockwise when `mirror` is set. Vertices are numbered from 1 in order of
/// discovery; each vertex contributes its neighbour numbers followed by 0.
pub fn rooted_code(map: &PlanarMap, root: Dart, mirror: bool) -> Vec<u16> {
    let prev = if mirror { Some(inverse(map.nexts())) } else { None };
    let step = |d: Dart| match &prev {
        Some(p) => p[d],
        None => map.next(d),
    };
    let n = map.vertex_count();
    let mut label = vec![0u16; n];
    let mut queue = Vec::with_capacity(n);
    let mut code = Vec::with_capacity(map.dart_count() + n);
    label[map.origin(root)] = 1;
    queue.push(root);
    let mut head = 0;
    while head < queue.len() {
        let first = queue[head];
        head += 1;
        let mut d = first;
        loop {
            let w = map.target(d);
            if label[w] == 0 {
                label[w] = queue.len() as u16 + 1;
                queue.push(map.twin(d));
            }
            code.push(label[w]);
            d = step(d);
            if d == first {
                break;
            }
        }
        code.push(0);
    }
    code
}

fn inverse(perm: &[Dart]) -> Vec<Dart> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Smallest rooted code over all roots and both orientations. Two connected
/// maps get the same code exactly when they are isomorphic, possibly by an
/// orientation-reversing map.
pub fn map_code(map: &PlanarMap) -> Vec<u16> {
    let mut best: Option<Vec<u16>> = None;
    for root in 0..map.dart_count() {
        for mirror in [false, true] {
            let c = rooted_code(map, root, mirror);
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
    }
    best.unwrap_or_default()
}

/// Sorted vertex degrees equal sorted face sizes; necessary for self-duality.
pub fn profiles_match(map: &PlanarMap) -> bool {
    let mut deg = map.degrees();
    let mut sizes: Vec<usize> = map.faces().iter().map(|f| f.size()).collect();
    deg.sort_unstable();
    sizes.sort_unstable();
    deg == sizes
}

/// Whether the map is isomorphic to its dual (reflections allowed).
pub fn is_self_dual(map: &PlanarMap) -> bool {
    profiles_match(map) && map_code(map) == map_code(&map.dual())
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct FilterCounts {
    pub read: usize,
    pub kept: usize,
}

/// Copies the maps of a `planar_code` stream that satisfy `keep` to `out`
/// as a new `planar_code` stream.
pub fn filter_stream(
    input: impl BufRead,
    mut out: impl Write,
    keep: impl Fn(&PlanarMap) -> bool,
) -> Result<FilterCounts, CodecError> {
    let io = |e: std::io::Error| CodecError::Io(e.to_string());
    out.write_all(PLANAR_CODE_HEADER).map_err(io)?;
    let mut counts = FilterCounts::default();
    for map in PlanarCodeReader::new(input)? {
        let map = map?;
        counts.read += 1;
        if keep(&map) {
            counts.kept += 1;
            let bytes = reuleaux::codec::write_planar_code(std::slice::from_ref(&map))?;
            out.write_all(&bytes[PLANAR_CODE_HEADER.len()..]).map_err(io)?;
        }
    }
    out.flush().map_err(io)?;
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use reuleaux::families;

    #[test]
    fn code_ignores_relabelling_and_reflection() {
        let w = families::wheel(6);
        let mut rot = w.rotations();
        // Relabel by reversing vertex numbers.
        let n = rot.len();
        rot.reverse();
        for r in &mut rot {
            for v in r.iter_mut() {
                *v = n - 1 - *v;
            }
        }
        let relabelled = PlanarMap::from_rotations(&rot).unwrap();
        assert_eq!(map_code(&w), map_code(&relabelled));
        assert_eq!(map_code(&w), map_code(&w.reflect()));
    }

    #[test]
    fn code_separates_small_polyhedra() {
        let maps = [
            families::tetrahedron(),
            families::wheel(4),
            families::wheel(5),
            families::prism(3),
            families::cube(),
            families::prism(5),
            families::wheel(7),
        ];
        for (i, a) in maps.iter().enumerate() {
            for b in &maps[i + 1..] {
                assert_ne!(map_code(a), map_code(b));
            }
        }
    }

    #[test]
    fn code_agrees_with_refinement_canonical_form() {
        let maps = reuleaux::generator::census(7, &reuleaux::generator::Source::Internal).unwrap();
        for (i, a) in maps.iter().enumerate() {
            for b in &maps[i + 1..] {
                assert_eq!(
                    map_code(a) == map_code(b),
                    a.canonical_form() == b.canonical_form()
                );
            }
        }
    }

    #[test]
    fn self_duality_of_families() {
        for k in 3..9 {
            assert!(is_self_dual(&families::wheel(k)));
        }
        assert!(!is_self_dual(&families::cube()));
        assert!(!is_self_dual(&families::prism(3)));
    }

    #[test]
    fn filter_keeps_only_matches() {
        let maps = vec![families::cube(), families::wheel(5), families::prism(5)];
        let bytes = reuleaux::codec::write_planar_code(&maps).unwrap();
        let mut out = Vec::new();
        let counts = filter_stream(&bytes[..], &mut out, is_self_dual).unwrap();
        assert_eq!(counts, FilterCounts { read: 3, kept: 1 });
        let kept = reuleaux::codec::read_planar_code(&out).unwrap();
        assert_eq!(kept, vec![families::wheel(5)]);
    }
}
