mod common;

use common::{fixture, SELF_DUAL_POOL};
use reuleaux::codec::{read_planar_code, write_planar_code, PlanarCodeReader};

fn all_fixture_names() -> Vec<String> {
    let mut names: Vec<String> = (4..=9).map(|n| format!("pool_n{n}.pc")).collect();
    names.extend(SELF_DUAL_POOL.iter().map(|(n, _)| format!("selfdual_n{n}.pc")));
    names
}

#[test]
fn write_after_read_is_byte_exact() {
    for name in all_fixture_names() {
        let bytes = std::fs::read(fixture(&name)).unwrap();
        let maps = read_planar_code(&bytes).unwrap();
        assert_eq!(write_planar_code(&maps).unwrap(), bytes, "{name}");
    }
}

#[test]
fn read_after_write_is_identity() {
    for name in all_fixture_names() {
        let maps = read_planar_code(&std::fs::read(fixture(&name)).unwrap()).unwrap();
        let again = read_planar_code(&write_planar_code(&maps).unwrap()).unwrap();
        assert_eq!(again, maps, "{name}");
    }
}

#[test]
fn streaming_reader_matches() {
    let bytes = std::fs::read(fixture("selfdual_n11.pc")).unwrap();
    let streamed: Vec<_> = PlanarCodeReader::new(&bytes[..])
        .unwrap()
        .collect::<Result<_, _>>()
        .unwrap();
    assert_eq!(streamed, read_planar_code(&bytes).unwrap());
}

#[test]
fn fixture_sizes_match_sidecars() {
    for (n, count) in SELF_DUAL_POOL {
        let name = format!("selfdual_n{n}.pc");
        let maps = read_planar_code(&std::fs::read(fixture(&name)).unwrap()).unwrap();
        assert_eq!(maps.len(), count, "{name}");
        let meta = std::fs::read_to_string(fixture(&format!("{name}.meta"))).unwrap();
        assert!(meta.contains(&format!("maps: {count}\n")), "{name}");
    }
}
