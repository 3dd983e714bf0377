mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::fixture;

fn reuleaux(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reuleaux")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Runs the census stage on a self-dual pool fixture and returns the
/// census file it wrote.
fn census_file(n: usize, dir: &Path) -> std::path::PathBuf {
    let src = format!("file:{}", fixture(&format!("selfdual_n{n}.pc")).display());
    let o = reuleaux(&["census", "--n", &n.to_string(), "--source", &src, "--out", path(dir)]);
    assert!(o.status.success());
    dir.join(format!("census_n{n}.pc"))
}

#[test]
fn census_summary_lines() {
    let dir = tempfile::tempdir().unwrap();
    for (n, want) in [(4, 1), (5, 0), (6, 1)] {
        let n_arg = n.to_string();
        let o = reuleaux(&["census", "--n", &n_arg, "--source", "internal", "--out", path(dir.path())]);
        assert!(o.status.success());
        assert!(stdout(&o).contains(&format!("selfdual={want}")), "{}", stdout(&o));
    }
    let src = format!("file:{}", fixture("selfdual_n12.pc").display());
    let o = reuleaux(&["census", "--n", "12", "--source", &src, "--out", path(dir.path())]);
    assert!(stdout(&o).contains("n=12 candidates=1908 selfdual=72"));
    let meta = std::fs::read_to_string(dir.path().join("census_n12.pc.meta")).unwrap();
    assert!(meta.starts_with("command: reuleaux census --n 12"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(reuleaux(&["census", "--n", "3"]).status.code(), Some(1));
    assert_eq!(reuleaux(&["census", "--n", "6", "--source", "nowhere"]).status.code(), Some(1));
    assert_eq!(reuleaux(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(reuleaux(&["census", "--n", "10"]).status.code(), Some(1));
    let missing = reuleaux(&["census", "--n", "6", "--source", "file:/nonexistent.pc"]);
    assert_eq!(missing.status.code(), Some(2));
    let census = fixture("selfdual_n6.pc");
    let o = reuleaux(&["embed", path(&census), "--epsilon", "0.99"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn colour_stage_reports_partial_failure() {
    let dir = tempfile::tempdir().unwrap();
    // The 16 self-dual maps at n = 8 include non-involutive ones.
    let o = reuleaux(&["color", path(&fixture("selfdual_n8.pc")), "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("colored 2 failed 14"));

    let good = census_file(8, dir.path());
    let o = reuleaux(&["color", path(&good), "--out", path(dir.path())]);
    assert!(o.status.success());
    let col = std::fs::read_to_string(dir.path().join("color/g001.col")).unwrap();
    assert_eq!(col.lines().filter(|l| !l.starts_with('#')).count(), 8);
}

#[test]
fn k4_colours_and_exports() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = fixture("selfdual_n4.pc");
    let o = reuleaux(&["color", path(&k4), "--out", path(dir.path())]);
    assert!(o.status.success());
    let colors = reuleaux::codec::read_coloring(&std::fs::read_to_string(dir.path().join("color/g000.col")).unwrap()).unwrap();
    assert_eq!(colors, vec![0, 1, 2, 3]);

    let o = reuleaux(&["embed", path(&k4), "--out", path(dir.path()), "--seed", "3"]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("embed/g000.emb")).unwrap();
    let emb = reuleaux::codec::read_embedding(&text).unwrap();
    assert!(emb.report.unwrap().max_edge_error <= 1e-7);

    let o = reuleaux(&["export", path(&dir.path().join("embed")), "--out", path(dir.path())]);
    assert!(o.status.success());
    let scad = std::fs::read_to_string(dir.path().join("scad/g000.scad")).unwrap();
    assert_eq!(scad.matches("sphere(r = 1").count(), 4);
}

#[test]
fn tiny_budget_is_reported_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let census = census_file(9, dir.path());
    let o = reuleaux(&["embed", path(&census), "--out", path(dir.path()), "--max-gens", "1", "--restarts", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("non-convergence"));
    let summary = std::fs::read_to_string(dir.path().join("embed/summary.txt")).unwrap();
    assert!(summary.contains("non-convergence"));
}

#[test]
fn non_injective_embedding_is_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let w = reuleaux::families::wheel(5);
    let iso = reuleaux::selfdual::find_strong_involution(&w).unwrap();
    let (colors, _) = reuleaux::coloring::four_coloring(&w, &iso).unwrap();
    let pts = reuleaux::coloring::tetrahedral_mapping(&colors);
    let file = dir.path().join("tetra.emb");
    std::fs::write(&file, reuleaux::codec::write_embedding(&pts, None, &[])).unwrap();
    let o = reuleaux(&["export", path(&file), "--out", path(dir.path())]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert!(!dir.path().join("scad/tetra.scad").exists());
}

#[test]
fn jobs_do_not_change_outputs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let census = census_file(9, a.path());
    reuleaux(&["embed", path(&census), "--out", path(a.path()), "--jobs", "1", "--seed", "9"]);
    reuleaux(&["embed", path(&census), "--out", path(b.path()), "--jobs", "3", "--seed", "9"]);
    // Embedding files differ only in the recorded `--jobs` and `--out` values.
    let strip = |p: &Path| -> String {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("# command"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    for f in ["g000.emb", "g003.emb", "summary.txt"] {
        assert_eq!(strip(&a.path().join("embed").join(f)), strip(&b.path().join("embed").join(f)));
    }
}
