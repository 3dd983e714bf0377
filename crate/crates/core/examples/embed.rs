//! Metric embedding of the 7-wheel's diameter graph by differential
//! evolution.
//!
//!     cargo run --release --example embed -- 42

use reuleaux::embedder::{embed, EmbedderConfig};
use reuleaux::families;
use reuleaux::selfdual::{diameter_graph, find_strong_involution};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let w = families::wheel(7);
    let iso = find_strong_involution(&w).unwrap();
    let d = diameter_graph(&w, &iso);
    let cfg = EmbedderConfig {
        seed,
        ..Default::default()
    };
    match embed(&d, &cfg) {
        Ok(res) => {
            for (v, p) in res.embedding.points.iter().enumerate() {
                println!("{v}: {:+.9} {:+.9} {:+.9}", p[0], p[1], p[2]);
            }
            println!("{:#?}", res.report);
        }
        Err(e) => println!("{e}"),
    }
}
