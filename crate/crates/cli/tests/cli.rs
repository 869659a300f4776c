use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgroup")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_reports_route_and_thinness() {
    let out = run(&["check", path(&corpus("heisenberg27.pc"))]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("route: reduction(class ≤ 3)"), "{text}");
    assert!(text.contains("thin: true"));

    let out = run(&["--format", "json", "check", path(&corpus("thin_sl2_z27_q5.pc"))]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["hypothesis_route"], "Thm3.4");
    assert_eq!(v["z2_type"], serde_json::json!([3, 3, 3]));
}

#[test]
fn malformed_and_inconsistent_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pc");
    fs::write(&bad, "p 3\nn 2\ncomm 2 x = 1\n").unwrap();
    let out = run(&["check", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let inconsistent = dir.path().join("inconsistent.pc");
    fs::write(&inconsistent, "p 3\nn 3\npow 1 = 2:1\ncomm 2 1 = 3:1\n").unwrap();
    assert_eq!(run(&["construct", path(&inconsistent)]).status.code(), Some(2));
    assert_eq!(run(&["check", path(&dir.path().join("missing.pc"))]).status.code(), Some(2));
}

#[test]
fn reductions_exit_10() {
    let out = run(&["construct", path(&corpus("heisenberg27.pc"))]);
    assert_eq!(out.status.code(), Some(10));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "reduction: class ≤ 3 (prior work)");
}

#[test]
fn cap_exits_3() {
    let out = run(&["--cap", "100", "construct", path(&corpus("thin_sl2_z27_q5.pc"))]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn construct_verify_round_trip_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let pc = corpus("thin_sl2_f3t3_q5.pc");
    let cert = dir.path().join("g.cert.json");
    assert_eq!(run(&["--out", path(&cert), "construct", path(&pc)]).status.code(), Some(0));
    let out = run(&["verify", path(&pc), path(&cert)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "pass\n");

    // Against another group.
    assert_eq!(run(&["verify", path(&corpus("thin_sl2_z27_q5.pc")), path(&cert)]).status.code(), Some(1));

    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    v["images"][5][5] = serde_json::json!(2);
    let tampered = dir.path().join("tampered.json");
    fs::write(&tampered, serde_json::to_string(&v).unwrap()).unwrap();
    let out = run(&["--format", "json", "verify", path(&pc), path(&tampered)]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["ok"], false);

    fs::write(&tampered, "{").unwrap();
    assert_eq!(run(&["verify", path(&pc), path(&tampered)]).status.code(), Some(2));
}

#[test]
fn oracle_summarises_heisenberg() {
    let out = run(&["oracle", path(&corpus("heisenberg27.pc"))]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("derivation lifts into Z(G) are inner"), "{text}");
}

#[test]
fn batch_has_one_row_per_file_and_survives_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["heisenberg27.pc", "thin_sl2_z27_q5.pc", "c9.pc"] {
        fs::copy(corpus(name), dir.path().join(name)).unwrap();
    }
    fs::write(dir.path().join("broken.pc"), "p 3\n").unwrap();
    fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let out = run(&["--format", "json", "--jobs", "2", "batch", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    let files: Vec<&str> = rows.iter().map(|r| r["file"].as_str().unwrap()).collect();
    assert_eq!(files, ["broken.pc", "c9.pc", "heisenberg27.pc", "thin_sl2_z27_q5.pc"]);
    let status: Vec<&str> = rows.iter().map(|r| r["status"].as_str().unwrap()).collect();
    assert_eq!(status, ["error", "reduction", "reduction", "certified"]);
    assert_eq!(rows[3]["certificate_route"], "Thm3.4-caseA");
}
