//! Strongly involutive self-dual maps among the polyhedra with n vertices
//! and 2n - 2 edges.
//!
//!     cargo run --release --example census -- 7
//!     cargo run --release --example census -- 12 tests/fixtures/selfdual_n12.pc

use reuleaux::generator::Source;
use reuleaux::pipeline::strongly_involutive;

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(7);
    let source = args.next().map_or(Source::Internal, |p| Source::File(p.into()));
    let (pool, found) = strongly_involutive(n, &source).expect("census");
    println!("n={n} candidates={pool} selfdual={}", found.len());
    for (map, iso) in &found {
        println!("  degrees {:?}  tau {:?}", map.degrees(), iso.tau);
    }
}
