mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use reuleaux::codec::{read_planar_code, write_planar_code};
use reuleaux::selfdual::{certify, diameter_graph, search_strong_involutions};
use reuleaux::{families, PlanarMap};

fn pool() -> &'static Vec<PlanarMap> {
    static POOL: OnceLock<Vec<PlanarMap>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut all = Vec::new();
        for n in 4..=11 {
            all.extend(common::read_fixture(&format!("selfdual_n{n}.pc")));
        }
        all.extend(common::read_fixture("pool_n8.pc"));
        all.extend(common::read_fixture("pool_n9.pc"));
        for k in 3..12 {
            all.push(families::wheel(k));
            all.push(families::prism(k));
        }
        all
    })
}

fn relabel(map: &PlanarMap, perm: &[usize], mirror: bool) -> PlanarMap {
    let rot = map.rotations();
    let mut out = vec![Vec::new(); rot.len()];
    for (v, r) in rot.iter().enumerate() {
        let mut r: Vec<usize> = r.iter().map(|&w| perm[w]).collect();
        if mirror {
            r.reverse();
        }
        out[perm[v]] = r;
    }
    PlanarMap::from_rotations(&out).unwrap()
}

fn permuted_map() -> impl Strategy<Value = PlanarMap> {
    (0..pool().len(), any::<bool>(), any::<u64>()).prop_map(|(i, mirror, key)| {
        let m = &pool()[i];
        let n = m.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        // Deterministic shuffle from the drawn key.
        let mut k = key;
        for j in (1..n).rev() {
            k = k.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(j, (k >> 33) as usize % (j + 1));
        }
        relabel(m, &perm, mirror)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn euler_and_face_count(m in permuted_map()) {
        prop_assert_eq!(m.vertex_count() + m.face_count(), m.edge_count() + 2);
        if m.edge_count() == 2 * m.vertex_count() - 2 {
            prop_assert_eq!(m.face_count(), m.vertex_count());
        }
        prop_assert!(m.is_three_connected());
    }

    #[test]
    fn dual_of_dual_is_identity(m in permuted_map()) {
        let dd = m.dual().dual();
        prop_assert_eq!(&dd, &m);
        prop_assert_eq!(m.dual().vertex_count(), m.face_count());
        prop_assert_eq!(m.dual().face_count(), m.vertex_count());
    }

    #[test]
    fn accepted_tau_recertifies(m in permuted_map()) {
        for iso in search_strong_involutions(&m, Some(8)) {
            prop_assert!(certify(&m, &iso).is_ok());
            let d = diameter_graph(&m, &iso);
            prop_assert_eq!(d.degrees(), m.degrees());
            prop_assert_eq!(d.edges.len(), m.edge_count());
        }
    }

    #[test]
    fn relabelling_keeps_canonical_form(m in permuted_map(), key in any::<u64>()) {
        let n = m.vertex_count();
        let perm: Vec<usize> = (0..n).map(|v| (v + key as usize % n) % n).collect();
        prop_assert_eq!(relabel(&m, &perm, false).canonical_form(), m.canonical_form());
        prop_assert_eq!(m.reflect().canonical_form(), m.canonical_form());
    }

    #[test]
    fn codec_round_trip(m in permuted_map()) {
        let bytes = write_planar_code(std::slice::from_ref(&m)).unwrap();
        let back = read_planar_code(&bytes).unwrap();
        prop_assert_eq!(&back[0], &m);
    }
}
