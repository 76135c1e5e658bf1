//! End-to-end checks of the `trop` binary: pinned outputs on the corpus,
//! determinism, and the exit-code contract (0 ok, 2 invalid, 3 numeric).

use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name);
    p.to_str().expect("utf-8 path").to_owned()
}

fn trop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = trop(args);
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

#[test]
fn validate_theta_is_a_point() {
    let out = stdout_of(&["validate", &corpus("theta.json")]);
    assert_eq!(
        out.trim(),
        r#"{"is_connected":true,"is_outer_space_point":true,"min_valence":3,"separating_edges":[]}"#
    );
}

#[test]
fn validate_dumbbell_fails_on_the_bridge() {
    let out = stdout_of(&["validate", &corpus("dumbbell.json")]);
    assert!(out.contains(r#""is_outer_space_point":false"#), "{out}");
    assert!(out.contains(r#""separating_edges":[2]"#), "{out}");
}

#[test]
fn period_theta_pinned_bytes() {
    let out = stdout_of(&["period", &corpus("theta.json"), "--marking", &corpus("theta_marking.json")]);
    assert_eq!(out.trim(), "[[0.8,0.3],[0.3,0.5]]");
}

#[test]
fn period_theta_exact_rationals() {
    let out = stdout_of(&[
        "period",
        &corpus("theta_exact.json"),
        "--marking",
        &corpus("theta_marking.json"),
        "--exact",
    ]);
    assert_eq!(out.trim(), r#"[["4/5","3/10"],["3/10","1/2"]]"#);
}

#[test]
fn torelli_looped_banana_pair_is_equal() {
    let out = stdout_of(&[
        "torelli",
        &corpus("looped_banana_1.json"),
        &corpus("looped_banana_2.json"),
        "--exact",
    ]);
    assert!(out.contains(r#""equal":true"#), "{out}");
}

#[test]
fn cyclic_eq_looped_banana_pair_is_not() {
    let out = stdout_of(&[
        "cyclic-eq",
        &corpus("looped_banana_1.json"),
        &corpus("looped_banana_2.json"),
        "--exact",
    ]);
    assert!(out.contains(r#""equivalent":false"#), "{out}");
}

#[test]
fn c1_sets_of_the_looped_banana() {
    let out = stdout_of(&["c1sets", &corpus("looped_banana_1.json")]);
    assert_eq!(out.trim(), r#"{"sets":[[0],[1],[2,3]]}"#);
}

#[test]
fn connectivize_collapses_to_a_rose() {
    let out = stdout_of(&["connectivize", &corpus("looped_banana_1.json"), "--exact"]);
    assert!(out.contains(r#""genus":3"#), "{out}");
    assert!(out.contains(r#""vertices":1"#), "{out}");
    assert!(out.contains(r#""length":"3/10""#), "{out}");
}

#[test]
fn shortest_vector_of_the_hexagonal_form() {
    let out = stdout_of(&["shortest-vector", &corpus("spd_a.json")]);
    assert!(out.contains(r#""value":2"#), "{out}");
}

#[test]
fn glnz_finds_the_congruence() {
    let out = stdout_of(&["glnz", &corpus("spd_a.json"), &corpus("spd_b.json")]);
    assert!(out.contains(r#""equivalent":true"#), "{out}");
}

#[test]
fn dist_d0_between_nearby_theta_points() {
    let out = stdout_of(&["dist", &corpus("point_a.json"), &corpus("point_b.json"), "--metric", "d0"]);
    // sqrt(0.1^2 + 0.1^2)
    assert_eq!(out.trim(), r#"{"value":0.14142135623731}"#);
}

#[test]
fn dist_intervals_are_ordered() {
    for metric in ["d1", "d2", "dinf"] {
        let out = stdout_of(&["dist", &corpus("point_a.json"), &corpus("point_b.json"), "--metric", metric]);
        let v: serde_json::Value = serde_json::from_str(&out).expect("json");
        let lo = v["lower"].as_f64().expect("lower");
        let hi = v["upper"].as_f64().expect("upper");
        assert!(0.0 < lo && lo <= hi, "{metric}: {out}");
    }
}

#[test]
fn tropical_line_has_a_balanced_vertex() {
    let out = stdout_of(&["tropical-corners", &corpus("poly_line.json")]);
    assert!(out.contains(r#""balanced":true"#), "{out}");
    assert!(out.contains(r#""point":["0","0"]"#), "{out}");
}

#[test]
fn tropical_double_root_has_weight_two() {
    let out = stdout_of(&["tropical-corners", &corpus("poly_double_root.json")]);
    assert!(out.contains(r#""weight":2"#), "{out}");
    assert!(out.contains(r#""vertices":[]"#), "{out}");
}

#[test]
fn volume_of_the_flat_chart_is_the_euclidean_area() {
    let out = stdout_of(&["volume", "--genus", "2", "--kind", "ds0", "--tol", "0.005"]);
    let v: serde_json::Value = serde_json::from_str(&out).expect("json");
    let area = v["value"].as_f64().expect("value");
    assert!((area - 0.75f64.sqrt()).abs() < 1e-9, "{out}");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let args: [Vec<String>; 4] = [
        vec!["period".into(), corpus("theta.json"), "--marking".into(), corpus("theta_marking.json")],
        vec!["tensor".into(), "--kind".into(), "ds2".into(), "--point".into(), corpus("point_a.json")],
        vec!["pathlen".into(), corpus("path_theta.json"), "--kind".into(), "ds2".into()],
        vec!["tropical-corners".into(), corpus("poly_line.json")],
    ];
    for argv in &args {
        let refs: Vec<&str> = argv.iter().map(|s| s.as_str()).collect();
        let first = trop(&refs);
        let second = trop(&refs);
        assert!(first.status.success(), "{refs:?}");
        assert_eq!(first.stdout, second.stdout, "{refs:?}");
    }
}

#[test]
fn emitted_graphs_reparse_to_equal_values() {
    let out = stdout_of(&["connectivize", &corpus("looped_banana_1.json"), "--exact"]);
    let v: serde_json::Value = serde_json::from_str(&out).expect("json");
    let quotient = v["quotient"].to_string();
    let dir = std::env::temp_dir().join("trop-roundtrip.json");
    std::fs::write(&dir, &quotient).expect("write temp");
    let again = stdout_of(&["connectivize", dir.to_str().expect("utf-8"), "--exact"]);
    let w: serde_json::Value = serde_json::from_str(&again).expect("json");
    assert_eq!(w["quotient"], v["quotient"]);
}

#[test]
fn malformed_json_exits_two_with_location() {
    let dir = std::env::temp_dir().join("trop-malformed.json");
    std::fs::write(&dir, "{\"vertices\": 2, \"edges\": [").expect("write temp");
    let out = trop(&["validate", dir.to_str().expect("utf-8")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn numeric_nonconvergence_exits_three() {
    let out = trop(&["volume", "--genus", "2", "--kind", "ds2", "--tol", "1e-13"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("did not converge"), "{err}");
}

#[test]
fn unknown_genus_is_a_validation_error() {
    let out = trop(&["volume", "--genus", "3", "--kind", "ds0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_single_criterion_passes() {
    let out = trop(&["report", "--criterion", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains(r#""all_passed":true"#), "{text}");
    let line = String::from_utf8_lossy(&out.stderr);
    assert!(line.contains("criterion 01 PASS"), "{line}");
}
