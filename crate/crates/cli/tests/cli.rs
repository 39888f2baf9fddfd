use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arboreal")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let v: Value = serde_json::from_slice(&out.stdout).expect("json report");
    (v, out.status.code().unwrap())
}

#[test]
fn enumerate_a2_has_four_entries() {
    let (v, code) = report(&["enumerate", "A2"]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"]["count"], 4);
    assert_eq!(v["checks"]["correspondences"].as_array().unwrap().len(), 4);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn nerve_of_a3() {
    let (v, code) = report(&["nerve", "a(b(c))"]);
    assert_eq!(code, 0);
    let by_dim = &v["checks"]["nerve"]["detail"]["by_dim"];
    assert_eq!((by_dim["0"].as_u64(), by_dim["1"].as_u64(), by_dim["2"].as_u64()), (Some(11), Some(22), Some(12)));
}

#[test]
fn nerve_as_dot() {
    let out = run(&["nerve", "A2", "--format", "dot"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("graph nerve {"));
    assert_eq!(s.matches("label=").count(), 4);
}

#[test]
fn sweep_up_to_four_passes() {
    let (v, code) = report(&["sweep", "--max-tree-size", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["checks"]["trees"]["detail"]["checked"], 1 + 1 + 2 + 4);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["comb", "--seed", "9", "--samples", "10"]).stdout;
    let b = run(&["comb", "--seed", "9", "--samples", "10"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn prime_field_and_negative_sign() {
    let (v, code) = report(&["nondegen", "a(b,c)", "--field", "F7", "--orientation-sign", "-1"]);
    assert_eq!(code, 0);
    assert_eq!(v["config"]["field"], "F_7");
}

#[test]
fn bad_inputs_exit_with_two() {
    assert_eq!(run(&["sweep", "--max-tree-size", "7"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "a(b"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "A2", "--field", "8"]).status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("arboreal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{\n  \"vertices\": [\"a\",\n").unwrap();
    let out = run(&["enumerate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn report_written_to_file() {
    let dir = std::env::temp_dir().join(format!("arboreal-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let out = run(&["stokes-link", "--rank", "2", "--slope", "3", "--half-integer", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["checks"]["components_gcd"]["detail"]["link"]["components"], 1);
}

#[test]
fn w1_detects_a_flipped_overlap() {
    let (v, _) = report(&["w1", "--circle", "2"]);
    assert_eq!(v["checks"]["orientable"], true);
    let (v, _) = report(&["w1", "--circle", "2", "--flip", "0"]);
    assert_eq!(v["checks"]["orientable"], false);
}
