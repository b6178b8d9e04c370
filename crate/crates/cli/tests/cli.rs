use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_capupdate");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("CHOQUET_TOL").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &TempDir, name: &str, body: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string_pretty(body).unwrap()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// m({1}) = 0.1, m({2,3}) = 0.5, m(Ω) = 0.4.
fn worked_example() -> Value {
    json!({
        "states": ["1", "2", "3"],
        "form": "moebius",
        "values": {"1": 0.1, "2|3": 0.5, "1|2|3": 0.4}
    })
}

fn generated(dir: &TempDir, kind: &str, n: &str, seed: &str, extra: &[&str]) -> PathBuf {
    let path = dir.path().join(format!("{kind}-{n}-{seed}.json"));
    let mut args = vec!["generate", "--kind", kind, "--n", n, "--seed", seed, "--out", s(&path)];
    args.extend_from_slice(extra);
    let out = run(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn generated_capacities_validate() {
    let dir = TempDir::new().unwrap();
    for kind in ["belief-function", "epsilon-contamination", "additive"] {
        let path = generated(&dir, kind, "4", "7", &[]);
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(doc["meta"]["generator"], kind);
        assert_eq!(doc["meta"]["seed"], 7);
        let out = run(&["validate", "--in", s(&path)]);
        assert_eq!(code(&out), 0);
        let report = stdout_json(&out);
        assert_eq!(report["valid"], true);
        assert_eq!(report["convex"], true);
    }
}

#[test]
fn generation_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = run(&["generate", "--kind", "belief-function", "--n", "5", "--seed", "42"]);
    let b = run(&["generate", "--kind", "belief-function", "--n", "5", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    let path = generated(&dir, "belief-function", "5", "42", &[]);
    assert_eq!(std::fs::read(path).unwrap(), a.stdout);
}

#[test]
fn non_convex_capacity_fails_validation() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "nc.json",
        &json!({
            "states": ["a", "b"],
            "form": "explicit",
            "values": {"": 0.0, "a": 0.6, "b": 0.6, "a|b": 1.0}
        }),
    );
    let out = run(&["validate", "--in", s(&path)]);
    assert_eq!(code(&out), 1);
    let report = stdout_json(&out);
    assert_eq!(report["valid"], true);
    assert_eq!(report["convex"], false);
    assert_eq!(report["convexity_violation"], json!(["a", "b"]));
}

#[test]
fn erml_at_one_is_byte_identical_to_ds() {
    let dir = TempDir::new().unwrap();
    let prior = generated(&dir, "belief-function", "5", "3", &["--focal-sets", "31"]);
    let values = |args: &[&str]| {
        let out = run(args);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        serde_json::to_string(&stdout_json(&out)["values"]).unwrap()
    };
    let event = "s1|s3|s4";
    let ds = values(&["update", "--in", s(&prior), "--event", event, "--rule", "ds"]);
    let erml = values(&["update", "--in", s(&prior), "--event", event, "--rule", "erml", "--alpha", "1"]);
    assert_eq!(ds, erml);
    let fh = values(&["update", "--in", s(&prior), "--event", event, "--rule", "fh"]);
    let erml0 = values(&["update", "--in", s(&prior), "--event", event, "--alpha", "0"]);
    assert_eq!(fh, erml0);
    assert_ne!(ds, fh);
}

#[test]
fn update_output_feeds_back_in() {
    let dir = TempDir::new().unwrap();
    let prior = write(&dir, "prior.json", &worked_example());
    let post = dir.path().join("post.json");
    let out = run(&["update", "--in", s(&prior), "--event", "1|2", "--alpha", "0.5", "--out", s(&post)]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&post).unwrap()).unwrap();
    assert_eq!(doc["meta"]["event"], "1|2");
    assert_eq!(doc["meta"]["rule"]["name"], "erml");
    assert_eq!(run(&["validate", "--in", s(&post)]).status.code(), Some(0));

    let inferred = run(&["infer-alpha", "--prior", s(&prior), "--posterior", s(&post), "--event", "1|2"]);
    assert_eq!(code(&inferred), 0);
    let report = stdout_json(&inferred);
    assert_eq!(report["status"], "identified");
    assert!((report["alpha"].as_f64().unwrap() - 0.5).abs() <= 1e-7);
}

#[test]
fn worked_example_passes_the_envelope_check() {
    let dir = TempDir::new().unwrap();
    let prior = write(&dir, "prior.json", &worked_example());
    let out = run(&["check-prop1", "--in", s(&prior)]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["pass"], true);
    assert!(report["max_deviation"].as_f64().unwrap() <= 1e-9);
    assert_eq!(report["failures"], json!([]));
}

#[test]
fn choquet_of_the_worked_example() {
    let dir = TempDir::new().unwrap();
    let prior = write(&dir, "prior.json", &worked_example());
    let out = run(&["choquet", "--in", s(&prior), "--act", "1,0,-1"]);
    assert_eq!(code(&out), 0);
    // 1·0.1 + 0·(ν{1,2} − ν{1}) − 1·(1 − ν{1,2}), with ν{1,2} = 0.1
    let value = stdout_json(&out)["value"].as_f64().unwrap();
    assert!((value - (0.1 - 0.9)).abs() <= 1e-12, "{value}");
}

#[test]
fn core_vertices_are_comonotonic() {
    let dir = TempDir::new().unwrap();
    let prior = write(&dir, "prior.json", &worked_example());
    let set = dir.path().join("core.json");
    assert_eq!(code(&run(&["core-vertices", "--in", s(&prior), "--out", s(&set)])), 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&set).unwrap()).unwrap();
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 4);
    let out = run(&["check-comonotonic", "--in", s(&set)]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["comonotonic"], true);
    assert!(report["hull_deviation"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn non_comonotonic_set_exits_one() {
    let dir = TempDir::new().unwrap();
    // {b} and {a,b} have no common maximizer
    let set = write(
        &dir,
        "set.json",
        &json!({
            "states": ["a", "b", "c"],
            "vertices": [[1.0, 0.0, 0.0], [0.0, 0.5, 0.5]]
        }),
    );
    let out = run(&["check-comonotonic", "--in", s(&set)]);
    assert_eq!(code(&out), 1);
    let report = stdout_json(&out);
    assert_eq!(report["comonotonic"], false);
    assert!(report["failing_chain"]["chain"].to_string().contains("a|b"));
}

#[test]
fn axiom_suite_separates_rules() {
    let dir = TempDir::new().unwrap();
    let prior = generated(&dir, "belief-function", "4", "0", &["--focal-sets", "15"]);
    let base = ["check-axioms", "--prior", s(&prior), "--samples", "40", "--seed", "1"];

    let out = run(&[&base[..], &["--alpha", "0.4"]].concat());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let report = stdout_json(&out);
    assert_eq!(report["pass"], true);
    assert_eq!(report["rule"], json!({"name": "erml", "alpha": 0.4}));

    let out = run(&[&base[..], &["--rule", "hybrid-event", "--alpha", "0.2", "--alt-alpha", "0.8"]].concat());
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["pass"], false);
}

#[test]
fn axiom_reports_replay_exactly() {
    let dir = TempDir::new().unwrap();
    let prior = generated(&dir, "belief-function", "4", "5", &["--focal-sets", "15"]);
    let args = ["check-axioms", "--prior", s(&prior), "--samples", "30", "--seed", "9", "--alpha", "0.7"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn reports_carry_version_and_tolerance() {
    let dir = TempDir::new().unwrap();
    let prior = write(&dir, "prior.json", &worked_example());
    let report = stdout_json(&run(&["validate", "--in", s(&prior)]));
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["tolerance"], 1e-9);

    let out = Command::new(BIN)
        .args(["validate", "--in", s(&prior)])
        .env("CHOQUET_TOL", "1e-6")
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out)["tolerance"], 1e-6);
}

#[test]
fn bad_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let prior = write(&dir, "prior.json", &worked_example());

    let out = run(&["update", "--in", s(&prior), "--event", "1|7"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("`7`"), "{err}");
    assert!(out.stdout.is_empty());

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"states\": [\"a\"], \"form\": \"explicit\",").unwrap();
    let out = run(&["validate", "--in", s(&broken)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let out = run(&["validate", "--in", s(&dir.path().join("missing.json"))]);
    assert_eq!(code(&out), 2);

    let out = Command::new(BIN)
        .args(["validate", "--in", s(&prior)])
        .env("CHOQUET_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn conditioning_on_a_null_event_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let prior = write(&dir, "prior.json", &worked_example());
    let out = run(&["update", "--in", s(&prior), "--event", ""]);
    assert_eq!(code(&out), 2);
}
