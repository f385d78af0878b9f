use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn lcdk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcdk")).args(args).output().expect("spawn lcdk")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let geo = write(&dir, "geo.json", r#"{"lo":0,"hi":4,"values":["1","1/2","1/4","1/8","1/16"]}"#);
    let gap = write(&dir, "gap.json", r#"{"lo":0,"hi":3,"values":["1","0","1","1"]}"#);
    let bad = write(&dir, "bad.json", r#"{"lo":0,"#);

    let out = lcdk(&["check", s(&geo)]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["result"]["log_concave"], true);
    assert_eq!(doc["result"]["log_affine"], true);
    assert_eq!(doc["result"]["backend"], "rational");

    let out = lcdk(&["check", s(&gap)]);
    assert_eq!(code(&out), 1);
    assert_eq!(json_of(&out)["passed"], false);

    assert_eq!(code(&lcdk(&["check", s(&dir.path().join("missing.json"))])), 2);
    assert_eq!(code(&lcdk(&["check", s(&bad)])), 2);
}

#[test]
fn check_require_selects_predicates() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", r#"{"lo":0,"hi":3,"values":["1","3","3","1"]}"#);
    assert_eq!(code(&lcdk(&["check", s(&f)])), 0);
    assert_eq!(code(&lcdk(&["check", s(&f), "--require", "log-concave,log-affine"])), 1);
    assert_eq!(code(&lcdk(&["check", s(&f), "--backend", "float", "--require", "unimodal"])), 0);
}

#[test]
fn geom_mean_of_uniform() {
    let out = lcdk(&["geom", "mean", "--p", "1", "--k", "2", "--l", "6"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out)["result"]["value"].as_f64().unwrap();
    assert!((v - 4.0).abs() < 1e-12, "{v}");
}

#[test]
fn geom_solve_p_outside_range_fails() {
    let out = lcdk(&["geom", "solve-p", "--k", "0", "--l", "5", "--c", "9"]);
    assert_eq!(code(&out), 1);
    assert!(json_of(&out)["result"]["infeasible"].is_string());
}

#[test]
fn exhaustive_dilation_passes() {
    let out = lcdk(&["verify", "dilation", "--exhaustive", "--interval", "0:12"]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["passed"], true);
    assert!(doc["result"]["instances_checked"].as_u64().unwrap() > 0);
}

#[test]
fn convolution_of_geometrics_is_log_concave() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", r#"{"lo":0,"hi":4,"values":["1","1/2","1/4","1/8","1/16"]}"#);
    let b = write(&dir, "b.json", r#"{"lo":1,"hi":3,"values":["1","2","1"]}"#);
    let out = lcdk(&["convolve", s(&a), s(&b)]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["result"]["log_concave"], true);
    assert_eq!(doc["result"]["convolution"]["lo"], 1);
    assert_eq!(doc["result"]["convolution"]["hi"], 7);
}

#[test]
fn extremize_dominates_oracle() {
    let out = lcdk(&[
        "extremize", "--interval", "0:10", "--functional", "tail>=5", "--constraint", "mean<=3", "--oracle", "2000",
    ]);
    assert_eq!(code(&out), 0);
    let r = &json_of(&out)["result"];
    let best = r["search"]["best_value"].as_f64().unwrap();
    let oracle = r["oracle"]["oracle_max"].as_f64().unwrap();
    assert!(oracle <= best + 1e-9, "oracle {oracle} > best {best}");
}

#[test]
fn infeasible_constraint_exits_one() {
    let out = lcdk(&["extremize", "--interval", "0:10", "--functional", "collision", "--constraint", "const:-1"]);
    assert_eq!(code(&out), 1);
    assert!(json_of(&out)["result"]["infeasible"].is_string());
}

#[test]
fn bad_constraint_is_a_usage_error() {
    let out = lcdk(&["extremize", "--interval", "0:10", "--functional", "collision", "--constraint", "median<3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn reports_are_reproducible() {
    let args = ["--no-timestamp", "--seed", "7", "verify", "prekopa-leindler", "--trials", "50"];
    let a = lcdk(&args);
    let b = lcdk(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = lcdk(&["--no-timestamp", "--seed", "8", "verify", "prekopa-leindler", "--trials", "50"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn report_written_on_failure() {
    let dir = TempDir::new().unwrap();
    let gap = write(&dir, "gap.json", r#"{"lo":0,"hi":3,"values":["1","0","1","1"]}"#);
    let report = dir.path().join("report.json");
    let out = lcdk(&["check", s(&gap), "--report", s(&report)]);
    assert_eq!(code(&out), 1);
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["passed"], false);
    assert_eq!(doc["tool"], "lcdk");
    assert!(doc["timestamp"].is_u64());
}

#[test]
fn csv_output() {
    let out = lcdk(&["--format", "csv", "verify", "modulus"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,instances_checked,passes,worst_slack"));
    assert!(lines.next().unwrap().starts_with("modulus,6,6,"));

    let out = lcdk(&["--format", "csv", "--seed", "3", "sample", "--interval", "2:5", "--count", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 4);
}

#[test]
fn sweeps_pass_with_defaults() {
    let runs: [&[&str]; 3] = [
        &["verify", "deviation", "--trials", "100"],
        &["verify", "reverse-jensen", "--trials", "100"],
        &["verify", "tail-shape"],
    ];
    for args in runs {
        let out = lcdk(args);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn tolerance_overrides_pass_rule() {
    let out = lcdk(&["--tolerance", "1e-30", "verify", "prekopa-leindler", "--trials", "200"]);
    let doc = json_of(&out);
    let worst = doc["result"]["worst_slack"].as_f64().unwrap();
    assert_eq!(code(&out) == 0, worst >= -1e-30);
    assert_eq!(doc["tolerance"], 1e-30);
}
