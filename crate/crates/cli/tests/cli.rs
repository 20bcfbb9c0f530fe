use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_verdex"))
        .args(args)
        .output()
        .expect("verdex runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn spec(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn temp_spec(dir: &tempfile::TempDir, body: &str) -> String {
    let p = dir.path().join("spec.toml");
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn build_boson() {
    let (code, out, _) = run(&["build", &spec("boson.toml")]);
    assert_eq!(code, 0);
    assert!(out.contains("fs = x1"), "{out}");
    assert!(out.contains("(a, a) 2"), "{out}");
}

#[test]
fn build_virasoro_reports_order_four() {
    let (code, out, _) = run(&["build", &spec("virasoro.toml"), "--json"]);
    assert_eq!(code, 0);
    let j: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["localityOrders"][0][0], 4);
    assert_eq!(j["generators"][0]["fs"], "L[-2]");
}

#[test]
fn virasoro_over_integers_is_refused() {
    let (code, _, err) = run(&["build", &spec("virasoro_z.toml")]);
    assert_eq!(code, 3);
    assert!(err.contains("invertible"), "{err}");
}

#[test]
fn build_sl2_from_lie_file() {
    let (code, out, _) = run(&["build", &spec("sl2.toml")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("(e, f) 2"), "{out}");
}

#[test]
fn eval_examples() {
    let vir = spec("virasoro.toml");
    for (e, want) in [
        ("nprod(L, L, 3)", "1/2 * C"),
        ("Y(vac)", "I"),
        ("lambda(L, L)", "L[-3] + 2λ L[-2] + (1/12)λ^3 C"),
        ("T(L[-2]) - nprod(L, L, 0)", "0"),
    ] {
        let (code, out, err) = run(&["eval", &vir, "-e", e]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(out.trim(), want, "{e}");
    }
    let (_, out, _) = run(&["eval", &spec("boson.toml"), "-e", "expzT(x1, 3)"]);
    assert_eq!(out.trim(), "x1 + x2 z + x3 z^2 + O(z^3)");
}

#[test]
fn eval_json_is_tagged() {
    let (code, out, _) = run(&["eval", &spec("virasoro.toml"), "-e", "nprod(L, L, 3)", "--json"]);
    assert_eq!(code, 0);
    let j: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["kind"], "state");
    assert_eq!(j["terms"][0]["coefficient"]["kind"], "exact-rational");
    assert_eq!(j["terms"][0]["coefficient"]["value"], "1/2");
}

#[test]
fn eval_diagnostics() {
    let (code, _, err) = run(&["eval", &spec("virasoro.toml"), "-e", "nprod(L, L"]);
    assert_eq!(code, 3);
    assert!(err.contains("column 11"), "{err}");
    let (code, _, err) = run(&["eval", &spec("boson.toml"), "-e", "Y(x1, x2)"]);
    assert_eq!(code, 3);
    assert!(err.contains("Y takes"), "{err}");
}

#[test]
fn verify_boson_all_suites() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a.json");
    let out2 = dir.path().join("b.json");
    let args = |o: &Path| {
        vec![
            "verify".to_string(),
            spec("boson.toml"),
            "--cases".into(),
            "10".into(),
            "--seed".into(),
            "1".into(),
            "--out".into(),
            o.to_string_lossy().into_owned(),
        ]
    };
    let a1: Vec<String> = args(&out1);
    let a2: Vec<String> = args(&out2);
    let (code, table, _) = run(&a1.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code, 0, "{table}");
    assert!(table.contains("borcherds"));
    run(&a2.iter().map(String::as_str).collect::<Vec<_>>());
    let t1 = std::fs::read_to_string(&out1).unwrap();
    let t2 = std::fs::read_to_string(&out2).unwrap();
    assert_eq!(t1, t2);
    let j: Value = serde_json::from_str(&t1).unwrap();
    assert_eq!(j["schemaVersion"], 1);
    assert_eq!(j["summary"]["nonzero"], 0);
    assert_eq!(j["suites"][0]["cases"][0]["verdict"], "exact-zero");
    assert_eq!(j["suites"][0]["cases"][0]["defect"]["kind"], "exact-rational");
}

#[test]
fn verify_admissibility_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let (code, _, _) = run(&[
        "verify",
        &spec("boson_t_2adic.toml"),
        "--out",
        &out.to_string_lossy(),
    ]);
    assert_eq!(code, 0);
    let j: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let entries = j["suites"][0]["admissibility"]["entries"].as_array().unwrap();
    let ratios: Vec<&str> = entries
        .iter()
        .map(|e| e["ratio"]["value"].as_str().unwrap())
        .collect();
    assert_eq!(ratios, ["1", "2", "4", "8"]);
}

#[test]
fn empty_suite_list() {
    let dir = tempfile::tempdir().unwrap();
    let s = temp_spec(&dir, "[algebra]\nkind = \"boson\"\n");
    let (code, out, _) = run(&["verify", &s]);
    assert_eq!(code, 0);
    let j: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["suites"].as_array().unwrap().len(), 0);
}

#[test]
fn inconclusive_only_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let s = temp_spec(
        &dir,
        "[algebra]\nkind = \"boson\"\n[probes]\ncount = 4\n[verify]\nsuites = [\"dong\"]\ndong_nmax = 1\ndong_window = 4\n",
    );
    let (code, out, _) = run(&["verify", &s]);
    assert_eq!(code, 2, "{out}");
    let j: Value = serde_json::from_str(&out).unwrap();
    assert!(!j["inconclusive"].as_array().unwrap().is_empty());
}

#[test]
fn configuration_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let s = temp_spec(&dir, "[algebra]\nkind = \"monster\"\n");
    assert_eq!(run(&["build", &s]).0, 3);
    assert_eq!(run(&["verify", &spec("boson.toml"), "--suite", "nope"]).0, 3);
    assert_eq!(run(&["build", "/nonexistent/spec.toml"]).0, 3);
}
