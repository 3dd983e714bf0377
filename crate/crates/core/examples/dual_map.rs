//! Faces, the dual map and a strongly involutive self-duality of the
//! 5-wheel, whose hub is sent to the rim face.

use reuleaux::families;
use reuleaux::selfdual::{certify, diameter_graph, search_strong_involutions};

fn main() {
    let w = families::wheel(5);
    println!("V={} E={} F={}", w.vertex_count(), w.edge_count(), w.face_count());
    for f in w.faces() {
        println!("face {}: {:?}", f.id, f.boundary_vertices);
    }

    let dual = w.dual();
    println!("dual degrees {:?}", dual.degrees());
    assert_eq!(dual.dual(), w);

    let all = search_strong_involutions(&w, None);
    println!("{} strongly involutive self-dualities", all.len());
    let iso = &all[0];
    certify(&w, iso).expect("certified");
    for (v, &f) in iso.tau.iter().enumerate() {
        println!("tau({v}) = face {f} {:?}", w.face(f).boundary_vertices);
    }
    println!("diameter graph edges {:?}", diameter_graph(&w, iso).edges);
}
