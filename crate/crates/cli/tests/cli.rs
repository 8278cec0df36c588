//! End-to-end tests of the binary: exit codes, determinism across thread
//! counts, and the bundled golden replay.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quiver-chow"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    cmd.output().expect("binary runs")
}

#[test]
fn fixed_points_on_flagship_instance() {
    let out = run(&[
        "fixed-points",
        fixture("kronecker23.quiver").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("fixed components: 13 (isolated: 13)"));
}

#[test]
fn toric_trees_on_bipartite_instance() {
    let out = run(&[
        "toric-gkm",
        "trees",
        fixture("k23.quiver").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("stable spanning trees: 6"));
}

#[test]
fn malformed_file_exits_2() {
    let dir = std::env::temp_dir().join("quiver-chow-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.quiver");
    std::fs::write(&bad, "vertices i j\n").unwrap();
    let out = run(&["fixed-points", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let missing = dir.join("does-not-exist.quiver");
    let out = run(&["fixed-points", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unnormalized_theta_exits_1() {
    let dir = std::env::temp_dir().join("quiver-chow-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("unnormalized.quiver");
    std::fs::write(
        &path,
        "vertices: i j\narrows: a: i -> j\ntheta: i = 1, j = 0\nd: i = 1, j = 1\n",
    )
    .unwrap();
    let out = run(&["toric-gkm", "trees", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("theta(1)"), "stderr: {err}");
}

#[test]
fn verify_examples_passes() {
    let out = run(&["verify-examples"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("all golden outputs match"));
}

#[test]
fn output_identical_across_thread_counts() {
    let file = fixture("kronecker23.quiver");
    let mut runs = Vec::new();
    for threads in ["1", "4"] {
        let mut cmd = bin();
        cmd.args(["localize", file.to_str().unwrap()]);
        cmd.env("QUIVER_CHOW_THREADS", threads);
        let out = cmd.output().expect("binary runs");
        assert!(out.status.success());
        runs.push(out.stdout);
    }
    assert_eq!(
        runs[0], runs[1],
        "byte-identical output across thread counts"
    );
}

#[test]
fn gkm_check_accepts_and_rejects() {
    let dir = std::env::temp_dir().join("quiver-chow-cli-test");
    std::fs::create_dir_all(&dir).unwrap();

    // restriction of x_22^2: survives at the two trees missing arrow 22
    let good = dir.join("good.tuple");
    std::fs::write(&good, "0: x_22^2\n5: x_22^2\n").unwrap();
    let out = run(&[
        "toric-gkm",
        "check",
        fixture("k23.quiver").to_str().unwrap(),
        good.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stdout: {}",
        String::from_utf8_lossy(&out.stdout)
    );

    let bad = dir.join("bad.tuple");
    std::fs::write(&bad, "0: x_22^2\n").unwrap();
    let out = run(&[
        "toric-gkm",
        "check",
        fixture("k23.quiver").to_str().unwrap(),
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL"));
    assert!(text.contains("violation at edge"));
}

#[test]
fn latex_output_has_column_vectors() {
    let out = run(&[
        "localize",
        fixture("p1.quiver").to_str().unwrap(),
        "--latex",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\\begin{pmatrix}"));
    assert!(text.contains("x_{a0}"));
}

#[test]
fn machine_format_is_line_oriented() {
    let out = run(&[
        "fixed-points",
        fixture("p1.quiver").to_str().unwrap(),
        "--format",
        "machine",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("component\t0\tdim=0\tisolated=true"));
}

#[test]
fn dot_output_is_a_graph() {
    let out = run(&[
        "toric-gkm",
        "edges",
        fixture("k23.quiver").to_str().unwrap(),
        "--dot",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph gkm {"));
    assert_eq!(text.matches(" -- ").count(), 6);
}
