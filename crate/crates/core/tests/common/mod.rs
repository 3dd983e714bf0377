#![allow(dead_code)]

use std::path::PathBuf;

use reuleaux::codec::read_planar_code;
use reuleaux::PlanarMap;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn read_fixture(name: &str) -> Vec<PlanarMap> {
    read_planar_code(&std::fs::read(fixture(name)).unwrap()).unwrap()
}

/// Strongly involutive self-dual counts for n = 4..=14.
pub const SI_COUNTS: [(usize, usize); 11] = [
    (4, 1),
    (5, 0),
    (6, 1),
    (7, 1),
    (8, 2),
    (9, 4),
    (10, 11),
    (11, 24),
    (12, 72),
    (13, 212),
    (14, 674),
];

/// Self-dual polyhedra with n vertices, the size of each pool fixture.
pub const SELF_DUAL_POOL: [(usize, usize); 11] = [
    (4, 1),
    (5, 1),
    (6, 2),
    (7, 6),
    (8, 16),
    (9, 50),
    (10, 165),
    (11, 554),
    (12, 1908),
    (13, 6667),
    (14, 23556),
];
