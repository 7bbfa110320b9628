//! End-to-end tests of the command-line interface: exit codes, output
//! formats, generator determinism, and the structured-report round trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_surface-basis"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn info_reports_theta_invariants() {
    let out = run(&["info", fixture("theta.sg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("n=2 m=3 faces=3 boundary=1 chi=2 genus=0 orientable beta=0"), "{text}");
    assert!(text.contains("|T|=1 |C|=2 |L|=0"));
}

#[test]
fn info_reports_projective_plane() {
    let out = run(&["info", fixture("pp1.sg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("non-orientable"), "{text}");
    assert!(text.contains("genus=1"));
    assert!(text.contains("beta=1"));
    assert!(text.contains("boundary=0"));
    assert!(text.contains("punctured face 0 for decomposition"));
}

#[test]
fn malformed_rot_line_is_cited() {
    let dir = std::env::temp_dir().join(format!("sb-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.sg");
    std::fs::write(&path, "v 2\ne 0 0 1 1 0\nrot 0 0*\n").unwrap();
    let out = run(&["info", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn mcb_theta_totals_seven() {
    let out = run(&["mcb", fixture("theta.sg").to_str().unwrap(), "--verify", "--format", "structured"]);
    assert_eq!(out.status.code(), Some(0));
    let report = surface_basis::report::parse_structured(&stdout(&out)).unwrap();
    assert_eq!(report.total_weight, Some(7.0));
    assert!(report.all_verifications_pass());
}

#[test]
fn mhb_grid5_totals_ten() {
    let dir = std::env::temp_dir().join(format!("sb-cli-grid-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grid5.sg");
    let gen = run(&["gen", "torus-grid", "5", "-o", path.to_str().unwrap()]);
    assert_eq!(gen.status.code(), Some(0));
    let out = run(&["mhb", path.to_str().unwrap(), "--verify", "--format", "structured"]);
    assert_eq!(out.status.code(), Some(0));
    let report = surface_basis::report::parse_structured(&stdout(&out)).unwrap();
    assert_eq!(report.total_weight, Some(10.0));
}

#[test]
fn mcb_rejects_non_orientable_with_exit_4() {
    let out = run(&["mcb", fixture("pp1.sg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn recursion_switch_gives_equal_weights() {
    let path = fixture("torus1.sg");
    let balanced = run(&["mhb", path.to_str().unwrap(), "--format", "structured"]);
    let simple = run(&["mhb", path.to_str().unwrap(), "--format", "structured", "--recursion", "simple"]);
    let rb = surface_basis::report::parse_structured(&stdout(&balanced)).unwrap();
    let rs = surface_basis::report::parse_structured(&stdout(&simple)).unwrap();
    assert_eq!(rb.total_weight, rs.total_weight);
}

#[test]
fn threads_flag_is_deterministic() {
    let path = fixture("grid_t3.sg");
    let one = run(&["mhb", path.to_str().unwrap(), "--format", "structured", "--threads", "1"]);
    let four = run(&["mhb", path.to_str().unwrap(), "--format", "structured", "--threads", "4"]);
    // Timing lines differ between runs; compare everything else.
    let strip = |s: &str| -> String {
        s.lines().filter(|l| !l.starts_with("timing")).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(strip(&stdout(&one)), strip(&stdout(&four)));
}

#[test]
fn gen_theta_matches_the_shipped_fixture_bytes() {
    let out = run(&["gen", "theta"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read_to_string(fixture("theta.sg")).unwrap();
    assert_eq!(stdout(&out), golden);
}

#[test]
fn gen_is_seed_deterministic() {
    let a = run(&["gen", "random-rotation", "6", "12", "42"]);
    let b = run(&["gen", "random-rotation", "6", "12", "42"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(!stdout(&a).is_empty());
    let c = run(&["gen", "random-rotation", "6", "12", "43"]);
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn gen_torus_grid_counts() {
    let out = run(&["gen", "torus-grid", "3"]);
    let spec = surface_basis::instance::parse(&stdout(&out)).unwrap();
    let g = surface_basis::embed::EmbeddedGraph::build(spec).unwrap();
    let s = g.stats();
    assert_eq!((s.n, s.m, s.faces, s.boundary), (9, 18, 9, 0));
}

#[test]
fn gen_rejects_bad_params() {
    assert_eq!(run(&["gen", "torus-grid", "0"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "random-rotation", "6", "2", "1"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "no-such-kind"]).status.code(), Some(2));
}

#[test]
fn structured_reports_parse_back() {
    for cmd in [vec!["info"], vec!["mcb", "--verify"], vec!["mhb", "--verify"]] {
        let mut args: Vec<&str> = vec![cmd[0]];
        let path = fixture("k4s.sg");
        args.push(path.to_str().unwrap());
        args.extend(&cmd[1..]);
        args.extend(["--format", "structured"]);
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let text = stdout(&out);
        let parsed = surface_basis::report::parse_structured(&text).unwrap();
        assert_eq!(surface_basis::report::write_structured(&parsed), text);
    }
}
