//! Small named maps used as fixtures and in examples.

use crate::planar_map::PlanarMap;

/// Wheel with `spokes` rim vertices: hub is vertex 0, rim vertices `1..=spokes`
/// in counter-clockwise order.
pub fn wheel(spokes: usize) -> PlanarMap {
    assert!(spokes >= 3, "a wheel needs at least 3 spokes");
    let k = spokes;
    let mut rot = vec![(1..=k).collect::<Vec<_>>()];
    for i in 1..=k {
        let prev = if i == 1 { k } else { i - 1 };
        let next = if i == k { 1 } else { i + 1 };
        rot.push(vec![0, prev, next]);
    }
    PlanarMap::from_rotations(&rot).expect("wheel rotation system is planar")
}

/// The tetrahedron, i.e. the 3-wheel.
pub fn tetrahedron() -> PlanarMap {
    wheel(3)
}

/// Prism over a `k`-gon: inner ring `0..k`, outer ring `k..2k`.
pub fn prism(k: usize) -> PlanarMap {
    assert!(k >= 3);
    let mut rot = Vec::with_capacity(2 * k);
    for i in 0..k {
        rot.push(vec![k + i, (i + 1) % k, (i + k - 1) % k]);
    }
    for i in 0..k {
        rot.push(vec![k + (i + 1) % k, i, k + (i + k - 1) % k]);
    }
    PlanarMap::from_rotations(&rot).expect("prism rotation system is planar")
}

pub fn cube() -> PlanarMap {
    prism(4)
}
