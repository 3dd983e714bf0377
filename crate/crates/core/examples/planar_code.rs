//! Reads a planar_code file, reports each map and writes it back.
//!
//!     cargo run --example planar_code -- tests/fixtures/pool_n7.pc

use reuleaux::codec::{read_planar_code, write_planar_code};

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/pool_n7.pc").to_string()
    });
    let bytes = std::fs::read(&path).expect("read");
    let maps = read_planar_code(&bytes).expect("planar_code");
    for (i, m) in maps.iter().enumerate() {
        println!(
            "{i}: V={} E={} F={} 3-connected={} rotations={:?}",
            m.vertex_count(),
            m.edge_count(),
            m.face_count(),
            m.is_three_connected(),
            m.rotations()
        );
    }
    assert_eq!(write_planar_code(&maps).unwrap(), bytes);
    println!("{} maps, re-encoded byte for byte", maps.len());
}
