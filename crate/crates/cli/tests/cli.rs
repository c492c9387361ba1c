use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dolbeault"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--json", "-"]);
    let out = run(&full);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "no JSON on stdout ({e}): {}",
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (out.status.code().unwrap(), doc)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn zero_tuple_is_the_invariant_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "zero.json", r#"{"X": [{}]}"#);
    let (code, doc) = run_json(&["verdict", "--preset", "su2su2", "--a", "0", "--b", "1", "--x-file", &zero]);
    assert_eq!(code, 0);
    let v = &doc["payload"]["verdict"];
    assert_eq!(v["verdict"], "invariant_baseline");
    assert_eq!((v["d_def"].as_u64(), v["d_inv"].as_u64()), (Some(7), Some(7)));
}

#[test]
fn generic_scaled_deformation_is_certified_non_invariant() {
    let (code, doc) = run_json(&["verdict", "--preset", "su2su2", "--scaled", "--x", "s*(H1+H2)"]);
    assert_eq!(code, 0);
    let v = &doc["payload"]["verdict"];
    assert_eq!(v["verdict"], "certified_non_invariant");
    assert_eq!((v["d_def"].as_u64(), v["d_inv"].as_u64()), (Some(3), Some(7)));
}

#[test]
fn resonant_deformation_is_refused_with_witness() {
    let out = run(&["cohomology", "tangent", "--preset", "su2su2", "--x", "1/3*H1"]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    let first = text.lines().next().unwrap();
    assert!(first.contains("rho = α1"), "{first}");
    assert!(first.contains("sigma=[]") && first.contains("lambda=[3, 0]") && first.contains("beta=[1]"), "{first}");

    let (code, doc) = run_json(&["cohomology", "tangent", "--preset", "su2su2", "--x", "1/3*H1"]);
    assert_eq!(code, 3);
    assert_eq!(doc["payload"]["tangent"]["status"], "refused");
}

#[test]
fn deformation_file_matches_preset() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "ce.json",
        r#"{"rootsystem": "A1xA1", "A": [["-1", "-1*i"]], "X": ["1/3*H1"], "mode": "exact"}"#,
    );
    let (c1, from_file) = run_json(&["cohomology", "tangent", "--deformation", &file]);
    let (c2, from_preset) = run_json(&["cohomology", "tangent", "--preset", "su2su2", "--x", "1/3*H1"]);
    assert_eq!((c1, c2), (3, 3));
    assert_eq!(from_file["payload"], from_preset["payload"]);
}

#[test]
fn invalid_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "broken.json", "{\"A\": [");
    assert_eq!(run(&["verdict", "--deformation", &broken]).status.code(), Some(2));
    assert_eq!(run(&["verdict", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(run(&["verdict", "--preset", "su2su2", "--x", "H1 +* E+1"]).status.code(), Some(2));
    assert_eq!(run(&["verdict", "--preset", "su2su2", "--x", "E+3"]).status.code(), Some(2));
    assert_eq!(run(&["rootsys", "show", "--rootsystem", "Q7"]).status.code(), Some(2));
    // [E+1, E-1] = H1 ≠ 0
    let noncommuting = ["verdict", "--rootsystem", "A1xA1xA1xA1", "--x", "E+1", "--x", "E-1"];
    assert_eq!(run(&noncommuting).status.code(), Some(2));
    assert_eq!(
        run(&["repn", "info", "--rootsystem", "A2", "--lambda", "5,5", "--ceiling-dim", "10"]).status.code(),
        Some(2)
    );
}

#[test]
fn structural_commands() {
    let (code, doc) = run_json(&["rootsys", "show", "--rootsystem", "G2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["payload"]["weyl_order"], "12");
    assert_eq!(doc["payload"]["positive_roots"].as_array().unwrap().len(), 6);

    let (code, doc) = run_json(&["weyl", "enum", "--rootsystem", "A2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["payload"]["order"], 6);
    assert_eq!(doc["payload"]["length_histogram"], serde_json::json!([1, 2, 2, 1]));

    let (code, doc) = run_json(&["repn", "info", "--rootsystem", "B2", "--lambda", "1,1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["payload"]["weyl_dimension"], "16");
    assert_eq!(doc["payload"]["built_dimension"], 16);

    let (code, doc) = run_json(&["oracle", "kostant", "--rootsystem", "G2", "--lambda", "1,0"]);
    assert_eq!(code, 0);
    assert_eq!(doc["payload"]["kostant"]["passed"], true);
}

#[test]
fn oracle_commands_agree() {
    let (code, doc) = run_json(&[
        "oracle", "bwbd", "--preset", "su2su2", "--x", "1/3*H1", "--rho", "1", "--lambda", "3,0",
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["payload"]["all_match"], true);
    assert!(doc["payload"]["comparisons"][0]["oracle_dims"][0].as_u64().unwrap() >= 1);

    let (code, doc) = run_json(&["oracle", "sweep", "--preset", "su2su2", "--x", "E+1 + i*H2", "--cutoff", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["payload"]["all_match"], true);
}

#[test]
fn report_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let args = ["report", "--preset", "su2su2", "--scaled", "--x", "s*(H1+H2)", "--cache-dir", cache];
    let (c1, first) = run_json(&args);
    let (c2, second) = run_json(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(first["payload"], second["payload"]);
    assert_eq!(second["timing"]["cached"], true);
    assert_eq!(std::fs::read_dir(cache).unwrap().count(), 1);
}

#[test]
fn json_to_file_and_text_projection() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = run(&["verdict", "--preset", "su2su2", "--scaled", "--x", "s*(H1+H2)", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["command"], "verdict");

    let text = String::from_utf8(run(&["verdict", "--preset", "su2su2", "--scaled", "--x", "s*(H1+H2)"]).stdout).unwrap();
    assert!(text.starts_with("verdict: certified_non_invariant"), "{text}");
    assert!(text.contains("d_def: 3"));
}
