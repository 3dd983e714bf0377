//! Reads a `planar_code` stream on stdin and writes the self-dual maps to
//! stdout. `--all` keeps every map instead, which normalises the stream
//! without filtering.
//!
//!     plantri -pc3m3 10 -e18 | cargo run --release --example filter_pool > sd10.pc

use std::io::{stdin, stdout, BufReader, BufWriter};
use std::process::ExitCode;

fn main() -> ExitCode {
    let all = std::env::args().any(|a| a == "--all");
    let input = BufReader::with_capacity(1 << 20, stdin().lock());
    let output = BufWriter::new(stdout().lock());
    let keep = |m: &reuleaux::PlanarMap| all || polypool::is_self_dual(m);
    match polypool::filter_stream(input, output, keep) {
        Ok(c) => {
            eprintln!("read {} kept {}", c.read, c.kept);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
