use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinnet"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn manifest() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("manifests/reference.json")
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

fn p(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

#[test]
fn symbol_prints_radical_then_decimal() {
    let out = ok(&["symbol", "6j", "2", "1", "1", "1", "1", "1"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "1/6");
    assert!((lines[1].parse::<f64>().unwrap() - 1.0 / 6.0).abs() < 1e-15);
    let out = ok(&["symbol", "3jm", "1/2", "1/2", "1", "1/2", "1/2", "-1"]);
    assert_eq!(out.lines().next(), Some("-1/3*sqrt(3)"));
    let out = ok(&["symbol", "3jm", "0.5", "0.5", "1", "0.5", "0.5", "-1"]);
    assert_eq!(out.lines().next(), Some("-1/3*sqrt(3)"));
    let out = ok(&["symbol", "6j", "2", "2", "2", "1", "1", "1"]);
    assert_eq!(out.lines().next(), Some("1/30*sqrt(21)"));
    let out = ok(&["symbol", "cg", "1/2", "1/2", "1/2", "-1/2", "1", "0"]);
    assert_eq!(out.lines().next(), Some("1/2*sqrt(2)"));
}

#[test]
fn symbol_rejects_bad_arguments_with_exit_2() {
    for args in [
        &["symbol", "6j", "1/2", "1", "1", "1", "1", "1"][..],
        &["symbol", "3jm", "1", "1", "3", "0", "0", "0"],
        &["symbol", "3jm", "1", "1", "1", "2", "0", "0"],
        &["symbol", "6j", "1", "1"],
        &["symbol", "9j"],
        &["symbol", "3jm", "x", "1", "1", "0", "0", "0"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn six_j_example_values_through_build_and_eval() {
    let d = tmp();
    let f = p(&d, "six.json");
    ok(&["build", "6j", "2", "1", "1", "1", "1", "1", "--out", &f]);
    assert!(Path::new(&p(&d, "six.correction.json")).exists());
    let out = ok(&["eval", &f]);
    assert!(out.contains("value: 480*sqrt(2)\n"), "{out}");
    assert!(out.contains("corrected: 1/6 "), "{out}");
    assert!(out.contains("plan: peak rank"));

    let f = p(&d, "eight.json");
    ok(&["build", "6j", "2", "2", "2", "1", "1", "1", "--out", &f]);
    let out = ok(&["eval", &f]);
    assert!(out.contains("value: 645120*sqrt(2)\n"), "{out}");
    assert!(out.contains("corrected: 1/30*sqrt(21) "), "{out}");
    let out = ok(&["eval", &f, "--mode", "float"]);
    let v: f64 = out.lines().next().unwrap().trim_start_matches("value: ").parse().unwrap();
    assert!((v / (645120.0 * 2f64.sqrt()) - 1.0).abs() < 1e-8);
}

#[test]
fn plugged_vertex_through_bits_and_spins() {
    let d = tmp();
    let f = p(&d, "v.json");
    ok(&["build", "3jm", "1/2", "1/2", "1", "--orient", "iio", "--out", &f]);
    for extra in [&["--plug", "1111"][..], &["--ms", "1/2,1/2,-1"]] {
        let mut args = vec!["eval", f.as_str()];
        args.extend_from_slice(extra);
        let out = ok(&args);
        assert!(out.contains("value: -4*sqrt(2)\n"), "{out}");
        assert!(out.contains("corrected: -1/3*sqrt(3) "), "{out}");
    }
    let o = run(&["eval", &f, "--plug", "11"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn build_reports_scalar_and_writes_dot() {
    let d = tmp();
    let (f, dot) = (p(&d, "s.json"), p(&d, "s.dot"));
    let out = ok(&["build", "symmetriser", "3", "--out", &f, "--dot", &dot]);
    assert!(out.contains("scalar: 1/6*sqrt(2)"), "{out}");
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("graph"));
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert!(json.get("vertices").is_some());
    // stdout mode prints the diagram itself
    let json: Value = serde_json::from_str(&ok(&["build", "cswap"])).unwrap();
    assert!(json.get("edges").is_some());
    let o = run(&["build", "3jm", "1", "1", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rank_cap_exits_3() {
    let d = tmp();
    let f = p(&d, "six.json");
    ok(&["build", "6j", "2", "1", "1", "1", "1", "1", "--out", &f]);
    let o = run(&["eval", &f, "--rank-cap", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rank cap 3"));
    let o = bin().args(["eval", &f]).env("SPINNET_RANK_CAP", "2").output().unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn eval_exports_tensors() {
    let d = tmp();
    let f = p(&d, "c.json");
    std::fs::write(&f, ok(&["build", "cswap"])).unwrap();
    let (j, n) = (p(&d, "c.tensor.json"), p(&d, "c.npy"));
    let out = ok(&["eval", &f, "--json", &j, "--npy", &n]);
    assert!(out.contains("value (4x8)"), "{out}");
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&j).unwrap()).unwrap();
    assert_eq!(t["mode"], "exact");
    let npy = std::fs::read(&n).unwrap();
    assert_eq!(&npy[..6], b"\x93NUMPY");
}

#[test]
fn verify_reference_manifest_passes_in_order() {
    let o = run(&["verify", manifest().to_str().unwrap()]);
    let out = stdout(&o);
    assert!(o.status.success(), "{out}");
    let m: Value = serde_json::from_str(&std::fs::read_to_string(manifest()).unwrap()).unwrap();
    let ids: Vec<&str> = m["cases"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let lines: Vec<&str> = out.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert_eq!(lines.len(), ids.len());
    for (l, id) in lines.iter().zip(&ids) {
        assert!(l.starts_with(&format!("PASS {id} ")), "{l}");
    }
    assert!(out.ends_with(&format!("{} passed, 0 failed, 0 over the rank cap\n", ids.len())));
}

#[test]
fn verify_only_runs_a_subset() {
    let out = ok(&["verify", manifest().to_str().unwrap(), "--only", "6j"]);
    let lines: Vec<&str> = out.lines().filter(|l| l.starts_with("PASS")).collect();
    assert!(!lines.is_empty());
    assert!(lines.iter().all(|l| l.contains("[6j]")));
    let out = ok(&["verify", manifest().to_str().unwrap(), "--only", "example-3"]);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 1);
    let o = run(&["verify", manifest().to_str().unwrap(), "--only", "nothing"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn perturbed_manifest_fails_that_case() {
    let mut m: Value = serde_json::from_str(&std::fs::read_to_string(manifest()).unwrap()).unwrap();
    let cases = m["cases"].as_array_mut().unwrap();
    cases.retain(|c| ["example-3", "example-7", "example-1-vertex"].contains(&c["id"].as_str().unwrap()));
    for c in cases.iter_mut() {
        match c["id"].as_str().unwrap() {
            "example-7" => c["expected"] = Value::from("1/7"),
            "example-1-vertex" => c["expected"]["rows"][0][0] = Value::from("2"),
            _ => {}
        }
    }
    let d = tmp();
    let f = p(&d, "bad.json");
    std::fs::write(&f, serde_json::to_string(&m).unwrap()).unwrap();
    let o = run(&["verify", &f]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("PASS example-3 "), "{out}");
    assert!(out.contains("FAIL example-7 [6j] (example 7): expected 1/7, got 1/6"), "{out}");
    assert!(out.contains("FAIL example-1-vertex [matrix]"), "{out}");
}

#[test]
fn verify_is_deterministic() {
    let m = manifest();
    let args = ["verify", m.to_str().unwrap(), "--only", "su2-invariance"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn simplify_emits_a_replayable_trace() {
    let d = tmp();
    let (f, g) = (p(&d, "s.json"), p(&d, "s2.json"));
    ok(&["build", "6j", "2", "1", "1", "1", "1", "1", "--out", &f]);
    let trace: Value = serde_json::from_str(&ok(&["simplify", &f, "--out", &g])).unwrap();
    assert!(!trace["steps"].as_array().unwrap().is_empty());
    assert_ne!(trace["initial_hash"], trace["final_hash"]);
    // the carried-over correction still applies
    let out = ok(&["eval", &g]);
    assert!(out.contains("value: 480*sqrt(2)\n") && out.contains("corrected: 1/6 "), "{out}");
    let out = ok(&["eval", &f, "--simplify"]);
    assert!(out.contains("value: 480*sqrt(2)\n"), "{out}");
    let o = run(&["simplify", &f, "--rules", "fuse,spider"]);
    assert_eq!(o.status.code(), Some(2));
}
