use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_affine-hall")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn every_suite_passes_on_kronecker_delta() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["roots", "catalog", "flags", "hall-check", "strata", "triangularity", "resolution", "symbolic"] {
        let o = run(dir.path(), &[suite, "--q", "2,3"]);
        assert_eq!(code(&o), 0, "{suite}: {}", stderr(&o));
        let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(report["suite"], suite);
        assert_eq!(report["pass"], true);
    }
}

#[test]
fn triangularity_at_two_delta_is_six_by_six() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["triangularity", "--nu", "2,2", "--q", "2", "--out", "t.json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("t.json")).unwrap()).unwrap();
    let raw = report["results"][0]["raw"].as_array().unwrap();
    assert_eq!(raw.len(), 6);
    assert!(raw.iter().all(|r| r.as_array().unwrap().len() == 6));
}

#[test]
fn resolution_through_three_delta() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["resolution", "--nu", "3,3", "--q", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // 2 + 6 + 14 indices for δ, 2δ, 3δ
    assert_eq!(report["results"].as_array().unwrap().len(), 22);
}

#[test]
fn flags_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["flags", "--q", "2,3", "--word", "(1i,1j)", "--out", "f.csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("f.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("word,q,fingerprint,raw,a,b"));
    assert!(lines.any(|l| l == "\"(1i,1j)\",2,P0+I1,1,1,0"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["roots", "--q", "6"][..],
        &["roots", "--nu", "0,0"],
        &["roots", "--nu", "1,1,1"],
        &["roots", "--nu", "7,7", "--bound", "12"],
        &["roots", "--quiver", "nonexistent"],
        &["no-such-suite"],
        &["flags", "--word", "(1k)"],
    ] {
        let o = run(dir.path(), args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn bad_quiver_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), "{\n  \"vertices\": [\"i\", \"j\"],\n  \"arrows\": [[\"j\", \"i\"],\n").unwrap();
    let o = run(dir.path(), &["roots", "--quiver", "bad.json"]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("bad.json") && err.contains("line 4 column 0"), "{err}");
    fs::write(dir.path().join("bad.json"), "{\"vertices\": [\"i\", \"j\"], \"arrows\": [[\"j\", \"k\"]]}").unwrap();
    let o = run(dir.path(), &["roots", "--quiver", "bad.json"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn quiver_file_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let built = run(dir.path(), &["roots", "--nu", "2,2"]);
    let report: serde_json::Value = serde_json::from_slice(&built.stdout).unwrap();
    fs::write(dir.path().join("k.json"), serde_json::to_string(&report["quiver"]).unwrap()).unwrap();
    let from_file = run(dir.path(), &["roots", "--nu", "2,2", "--quiver", "k.json"]);
    assert_eq!(code(&from_file), 0, "{}", stderr(&from_file));
    assert_eq!(built.stdout, from_file.stdout);
}

#[test]
fn hall_fit_needs_four_field_sizes() {
    // degree-2 Hall polynomials at 2δ need three fit points plus one check
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["hall-check", "--nu", "2,2", "--q", "2,3,4,5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["results"]["polynomial_fit"]["max_degree"], 2);
    let o = run(dir.path(), &["hall-check", "--nu", "2,2", "--q", "2,3,4"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report["results"]["polynomial_fit"].is_null());
}

#[test]
fn cache_reuse_and_rebuild_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["hall-check", "--nu", "2,2", "--q", "2,3", "--cache", ".cache/", "--out", "r.json"];
    let read = || fs::read(dir.path().join("r.json")).unwrap();
    assert_eq!(code(&run(dir.path(), &args)), 0);
    let first = read();
    let cache = dir.path().join(".cache");
    let files: Vec<_> = fs::read_dir(&cache).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 2);
    assert!(files.iter().all(|f| f.extension().unwrap() == "jsonl" && fs::metadata(f).unwrap().len() > 0));

    assert_eq!(code(&run(dir.path(), &args)), 0);
    assert_eq!(read(), first);

    fs::remove_dir_all(&cache).unwrap();
    assert_eq!(code(&run(dir.path(), &args)), 0);
    assert_eq!(read(), first);

    let mut text = fs::read_to_string(&files[0]).unwrap();
    text.push_str("{\"truncated\": \n");
    fs::write(&files[0], text).unwrap();
    let o = run(dir.path(), &args);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
    assert_eq!(read(), first);
    // the rebuilt file is clean again
    let o = run(dir.path(), &args);
    assert!(!stderr(&o).contains("warning"), "{}", stderr(&o));
}

#[test]
fn formats_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for fmt in ["json", "csv", "table"] {
        let a = run(dir.path(), &["strata", "--nu", "2,2", "--q", "2,3", "--format", fmt]);
        let b = run(dir.path(), &["strata", "--nu", "2,2", "--q", "2,3", "--format", fmt, "--sequential"]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{fmt}");
    }
}
