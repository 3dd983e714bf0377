//! Prints the OpenSCAD script of a Reuleaux polyhedron: the regular
//! tetrahedron by default, or an embedding file given on the command line.
//!
//!     cargo run --example export_scad > tetra.scad

use reuleaux::coloring::tetrahedron_coords;
use reuleaux::scad::{export_reuleaux, DEFAULT_RESOLUTION};

fn main() {
    let points = match std::env::args().nth(1) {
        Some(path) => {
            let text = std::fs::read_to_string(path).expect("read");
            reuleaux::codec::read_embedding(&text).expect("embedding").points
        }
        None => tetrahedron_coords().to_vec(),
    };
    match export_reuleaux(&points, 0.2, DEFAULT_RESOLUTION, &[]) {
        Ok(script) => print!("{}", script.text),
        Err(e) => eprintln!("{e}"),
    }
}
