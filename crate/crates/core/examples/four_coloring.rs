//! Reduces a self-dual map to the tetrahedron by remove-contract steps and
//! colours its diameter graph with the four surviving classes.
//!
//!     cargo run --release --example four_coloring -- tests/fixtures/selfdual_n11.pc

use reuleaux::coloring::{chromatic_oracle, four_coloring, tetrahedral_mapping};
use reuleaux::families;
use reuleaux::selfdual::{diameter_graph, find_strong_involution};

fn main() {
    let maps = match std::env::args().nth(1) {
        Some(path) => reuleaux::codec::read_planar_code(&std::fs::read(path).expect("read"))
            .expect("planar_code"),
        None => vec![families::wheel(7)],
    };
    for map in maps {
        let Some(iso) = find_strong_involution(&map) else {
            println!("skipping a map without a strongly involutive self-duality");
            continue;
        };
        let (colors, forest) = four_coloring(&map, &iso).expect("reduction");
        for step in &forest.steps {
            println!(
                "contract {:?}, delete {:?}, cleanup {:?}",
                step.contracted_edge, step.deleted_edge, step.cleanup_log
            );
        }
        let d = diameter_graph(&map, &iso);
        println!("classes {:?}", forest.classes());
        println!("colors {colors:?}");
        println!("3-colourable: {}", chromatic_oracle(&d, 3));
        let points = tetrahedral_mapping(&colors);
        println!("tetrahedral mapping uses {} distinct points", {
            let mut p: Vec<_> = points.iter().map(|q| q.map(f64::to_bits)).collect();
            p.sort();
            p.dedup();
            p.len()
        });
    }
}
