use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resumkit")).args(args).env_remove("RESUMKIT_THREADS").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("resumkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

/// Every string of the form `n/d` in a document.
fn rationals(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::String(s) if s.contains('/') && s.split('/').all(|p| p.trim_start_matches('-').chars().all(|c| c.is_ascii_digit()) && !p.is_empty()) => {
            out.push(s.clone())
        }
        Value::Array(items) => items.iter().for_each(|x| rationals(x, out)),
        Value::Object(map) => map.values().for_each(|x| rationals(x, out)),
        _ => {}
    }
}

#[test]
fn g_eye_weight_table() {
    let doc = json(&["weights", &fixture("g_eye.json"), "--method", "dc"]);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["config"]["method"], "dc");
    let trees = doc["payload"]["trees"].as_array().unwrap();
    let count = |w: &str| trees.iter().filter(|t| t["w"] == w).count();
    assert_eq!((count("1/15"), count("11/120")), (4, 8));
    let t123 = trees.iter().find(|t| t["tree"] == serde_json::json!(["l1", "l2", "l3"])).unwrap();
    assert_eq!(t123["N"], 48);
    assert_eq!(doc["payload"]["sum"], "1/1");
}

#[test]
fn exact_methods_print_identical_payloads() {
    let payloads: Vec<Value> =
        ["brute", "dc", "symbolic"].iter().map(|m| json(&["weights", &fixture("g_eye.json"), "--method", m])["payload"].clone()).collect();
    assert_eq!(payloads[0], payloads[1]);
    assert_eq!(payloads[1], payloads[2]);
}

#[test]
fn exact_values_parse_back() {
    for args in [
        vec!["weights".to_string(), fixture("g_eye.json")],
        vec!["phi4-lve".to_string(), "--order".to_string(), "2".to_string()],
        vec!["symanzik".to_string(), fixture("triangle.json"), "--at".to_string(), "ab=1/2,bc=3,ca=7/5".to_string()],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let mut found = Vec::new();
        rationals(&json(&args), &mut found);
        assert!(!found.is_empty());
        for s in found {
            let q = resumkit::scalar::parse_rational(&s).unwrap();
            assert_eq!(resumkit::scalar::format_rational(&q), s);
        }
    }
}

#[test]
fn zero_dimension_amplitude_is_exact() {
    let doc = json(&["amplitude", &fixture("bubble.json"), "--dim", "0", "--mass", "2", "--samples", "10", "--seed", "1"]);
    assert_eq!(doc["payload"]["estimate"].as_f64(), Some(1.0 / 16.0));
    assert_eq!(doc["payload"]["std_error"].as_f64(), Some(0.0));
}

#[test]
fn stochastic_output_is_byte_identical() {
    let args = ["amplitude", &fixture("g_eye.json"), "--dim", "1", "--mass", "1", "--samples", "2e4", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let sector = ["amplitude", &fixture("triangle.json"), "--dim", "1", "--mass", "1", "--samples", "6000", "--seed", "3", "--sector-decomposed"];
    assert_eq!(run(&sector).stdout, run(&sector).stdout);
    let mc = ["weights", &fixture("triangle.json"), "--method", "mc", "--samples", "5000", "--seed", "11"];
    assert_eq!(run(&mc).stdout, run(&mc).stdout);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["amplitude", &fixture("g_eye.json"), "--dim", "1", "--mass", "1", "--samples", "5000", "--seed", "2"];
    let one = Command::new(env!("CARGO_BIN_EXE_resumkit")).args(args).env("RESUMKIT_THREADS", "1").output().unwrap();
    let three = Command::new(env!("CARGO_BIN_EXE_resumkit")).args(args).args(["--threads", "3"]).output().unwrap();
    assert!(one.status.success() && three.status.success());
    let payload = |o: &Output| serde_json::from_slice::<Value>(&o.stdout).unwrap()["payload"].clone();
    assert_eq!(payload(&one), payload(&three));
}

#[test]
fn seeds_are_mandatory() {
    let out = run(&["weights", &fixture("triangle.json"), "--method", "mc", "--samples", "100"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
    let out = run(&["amplitude", &fixture("bubble.json"), "--dim", "1", "--mass", "1", "--samples", "100"]);
    assert!(!out.status.success());
}

#[test]
fn lve_totals() {
    let doc = json(&["phi4-lve", "--order", "2", "--lambda", "0.01"]);
    let p = &doc["payload"];
    assert_eq!(p["totals"]["1"], "-3/2");
    assert_eq!(p["totals"]["2"], "12/1");
    assert_eq!(p["matches_oracle"], true);
    assert_eq!(p["vacuum_graphs"]["2"]["connected"], 96);
    let e = &p["evaluation"];
    assert!((e["repacked"].as_f64().unwrap() - e["quadrature"].as_f64().unwrap()).abs() < 5e-4);
}

#[test]
fn psd_check_path_tree() {
    let doc = json(&["psd-check", &fixture("g_eye.json"), "--tree", "l1,l2,l5", "--w", "l1=0.5,l2=0.3,l5=0.8"]);
    let p = &doc["payload"];
    assert_eq!(p["psd"], true);
    assert!(p["min_eigenvalue"].as_f64().unwrap() > 0.0);
    assert_eq!(p["max_reconstruction_residual"].as_f64(), Some(0.0));
    assert_eq!(p["blocks"]["coefficients"], serde_json::json!(["1/5", "3/10", "1/5", "3/10"]));
    assert_eq!(p["blocks"]["order"], serde_json::json!(["l5", "l1", "l2"]));

    let random = json(&["psd-check", &fixture("g_eye.json"), "--tree", "l1,l2,l5", "--samples", "20", "--seed", "4", "--scalar", "f64"]);
    assert_eq!(random["payload"]["instances"].as_array().unwrap().len(), 20);
    assert_eq!(random["payload"]["psd"], true);
}

#[test]
fn symanzik_of_g_eye() {
    let doc = json(&["symanzik", &fixture("g_eye.json")]);
    assert_eq!(doc["payload"]["monomial_count"], 12);
    assert_eq!(doc["payload"]["degree"], 3);
    assert_eq!(doc["payload"]["value_at_ones"], "12/1");
}

#[test]
fn sectors_listing() {
    let doc = json(&["sectors", &fixture("g_eye.json"), "--tree", "l1,l2,l3"]);
    assert_eq!(doc["payload"]["N"], 48);
    assert_eq!(doc["payload"]["w"], "1/15");
    assert_eq!(doc["payload"]["sectors"].as_array().unwrap().len(), 48);
}

#[test]
fn csv_output() {
    let out = run(&["weights", &fixture("bubble.json"), "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "tree,w,N\nl1,1/2,1\nl2,1/2,1\n");
}

#[test]
fn caps_are_structured_errors() {
    let out = run(&["phi4-lve", "--order", "4"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[cap]:"));
    let out = run(&["weights", &fixture("g_eye.json"), "--method", "brute", "--brute-cap", "5"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(out.stdout.is_empty());
}

#[test]
fn graph_file_diagnostics_are_distinct() {
    let cases = [
        ("parse.json", "{\"vertices\": [\"A\"], \"edges\": [", "could not be parsed"),
        ("duplicate.json", r#"{"vertices":["A","B"],"edges":[{"id":"e","ends":["A","B"]},{"id":"e","ends":["A","B"]}]}"#, "duplicate edge"),
        ("dangling.json", r#"{"vertices":["A","B"],"edges":[{"id":"e","ends":["A","C"]}]}"#, "unknown vertex"),
    ];
    let mut messages = Vec::new();
    for (name, body, expected) in cases {
        let path = scratch_file(name, body);
        let out = run(&["symanzik", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(3), "{name}");
        let err = String::from_utf8_lossy(&out.stderr).to_lowercase();
        assert!(err.contains(expected), "{name}: {err}");
        messages.push(err);
    }
    let missing = run(&["symanzik", "/nonexistent/graph.json"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["payload"]["passed"], true);
}
