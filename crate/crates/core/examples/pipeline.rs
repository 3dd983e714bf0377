//! All four stages on the n = 9 census, written under a scratch directory.

use reuleaux::generator::Source;
use reuleaux::pipeline::{run_pipeline, RunContext};

fn main() {
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/selfdual_n9.pc");
    let out = std::env::temp_dir().join("reuleaux-example");
    let ctx = RunContext::new("example pipeline");
    let res = run_pipeline(9, &Source::File(fixtures.into()), &out, &ctx).expect("pipeline");
    println!("{}", res.census.summary_line());
    println!("coloured {}", res.color.written.len());
    println!("embedded {}/{}", res.embed.successes(), res.embed.rows.len());
    for p in &res.export.written {
        println!("wrote {}", p.display());
    }
}
