use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BUILTINS: [&str; 9] = [
    "classical-2",
    "classical-3",
    "classical-4",
    "gbit-2-2",
    "gbit-3-2",
    "gbit-4-2",
    "gbit-2-3",
    "spekkens",
    "octahedron",
];

fn gpt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpt")).args(args).env_remove("GPT_SEARCH_BUDGET").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = gpt(&a);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn builtins_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    for name in BUILTINS {
        let first = gpt(&["theory", "export", name]);
        assert_eq!(first.status.code(), Some(0), "{name}: {}", stderr(&first));
        let path = write(dir.path(), &format!("{name}.json"), &stdout(&first));
        let second = gpt(&["theory", "export", &path]);
        assert_eq!(first.stdout, second.stdout, "{name} changed on round trip");
        let v = json(&["theory", "validate", &path]);
        assert_eq!(v["valid"], true);
        assert_eq!(v["round_trip"], true);
    }
}

#[test]
fn file_theories_behave_like_builtins() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "cube.json", &stdout(&gpt(&["theory", "export", "gbit-3-2"])));
    for args in [vec!["auto-group"], vec!["phase-group", "_", "Z"], vec!["interfere", "_", "Z"]] {
        let with = |t: &str| -> Vec<String> {
            let mut a: Vec<String> = args.iter().map(|s| s.to_string()).collect();
            if a.len() == 1 {
                a.push(t.into());
            } else {
                a[1] = t.into();
            }
            a
        };
        let b = with("gbit-3-2");
        let f = with(&path);
        let mut vb = json(&b.iter().map(|s| s.as_str()).collect::<Vec<_>>());
        let mut vf = json(&f.iter().map(|s| s.as_str()).collect::<Vec<_>>());
        // the literature note is tied to the built-in name only
        vb.as_object_mut().unwrap().remove("notes");
        vf.as_object_mut().unwrap().remove("notes");
        assert_eq!(vb, vf, "{args:?}");
    }
}

#[test]
fn malformed_file_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let good = stdout(&gpt(&["theory", "export", "classical-2"]));
    let truncated = write(dir.path(), "truncated.json", &good[..good.len() / 2]);
    let bad_rational = write(dir.path(), "bad.json", &good.replacen("\"1/1\"", "\"1/0\"", 1));
    let unknown_field = write(dir.path(), "extra.json", &good.replacen('{', "{\n  \"colour\": 1,", 1));
    for path in [truncated, bad_rational, unknown_field] {
        let o = gpt(&["theory", "validate", &path]);
        assert_eq!(o.status.code(), Some(3), "{path}");
        let e = stderr(&o);
        assert!(e.contains("line") && e.contains("column"), "{e}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn schema_version_is_checked() {
    let dir = tempfile::tempdir().unwrap();
    let good = stdout(&gpt(&["theory", "export", "classical-2"]));
    let path = write(dir.path(), "v2.json", &good.replace("\"schema_version\": 1", "\"schema_version\": 2"));
    let o = gpt(&["theory", "show", &path]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("schema_version"));
}

#[test]
fn duplicate_vertices_fail_before_the_theorem_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: Value = serde_json::from_str(&stdout(&gpt(&["theory", "export", "gbit-2-2"]))).unwrap();
    let pts = v["extreme_points"].as_array_mut().unwrap();
    let first = pts[0].clone();
    pts.push(first);
    let path = write(dir.path(), "dup.json", &serde_json::to_string(&v).unwrap());
    let o = gpt(&["verify-theorem", "--theories", &format!("classical-2,{path}")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty(), "theorem output before validation: {}", stdout(&o));
    assert!(stderr(&o).to_lowercase().contains("duplicate"), "{}", stderr(&o));
}

#[test]
fn non_extreme_point_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: Value = serde_json::from_str(&stdout(&gpt(&["theory", "export", "classical-3"]))).unwrap();
    v["extreme_points"].as_array_mut().unwrap().push(serde_json::json!(["1/3", "1/3", "1/3"]));
    let path = write(dir.path(), "interior.json", &serde_json::to_string(&v).unwrap());
    assert_eq!(gpt(&["theory", "validate", &path]).status.code(), Some(3));
}

#[test]
fn budget_exhaustion_exits_4() {
    let o = Command::new(env!("CARGO_BIN_EXE_gpt"))
        .args(["auto-group", "gbit-3-2"])
        .env("GPT_SEARCH_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(stderr(&o).contains("budget"));
    let o = Command::new(env!("CARGO_BIN_EXE_gpt"))
        .args(["auto-group", "gbit-3-2"])
        .env("GPT_SEARCH_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["auto-group", "qutrit"],
        vec!["phase-group", "gbit-3-2", "W"],
        vec!["auto-group", "qubit"],
        vec!["frobnicate"],
        vec!["theory", "show", "gbit-3-2", "--format", "yaml"],
        vec!["theory", "show", "gbit-3-2", "--format", "csv"],
        vec!["qubit", "effects", "--alpha", "0.1", "--beta", "0", "--gauge", "1,1,1"],
        vec!["qubit", "mzi", "--phi", "1", "--lambda", "1,2"],
        vec!["verify-theorem", "--theories", ""],
    ] {
        let o = gpt(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn json_output_is_byte_stable() {
    for args in [
        vec!["auto-group", "gbit-4-2", "--format", "json"],
        vec!["phase-group", "spekkens", "diagonal", "--format", "json"],
        vec!["interfere", "gbit-3-2", "Z", "--full-state", "--format", "json"],
        vec!["verify-theorem", "--format", "json"],
        vec!["qubit", "tprob", "--alpha", "0.7", "--beta", "-1.2", "--format", "json"],
    ] {
        let a = gpt(&args);
        let b = gpt(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let text = stdout(&a);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(format!("{}\n", serde_json::to_string_pretty(&v).unwrap()), text);
    }
}

#[test]
fn auto_group_reports() {
    let v = json(&["auto-group", "gbit-3-2"]);
    assert_eq!(v["order"], 48);
    assert_eq!(v["name"], "B3_order48");
    assert_eq!(v["notes"][0]["kind"], "literature_agreement");
    let v = json(&["auto-group", "gbit-3-2", "--exclude-reflections"]);
    assert_eq!(v["order"], 24);
    assert_eq!(v["name"], "S4");
    assert_eq!(v["notes"].as_array().unwrap().len(), 0);
    let v = json(&["auto-group", "spekkens"]);
    assert_eq!(v["order"], 24);
    assert_eq!(v["policy"], "explicit_group");
    let v = json(&["auto-group", "classical-3"]);
    assert_eq!(v["element_orders"], serde_json::json!({"1": 1, "2": 3, "3": 2}));
}

#[test]
fn phase_group_reports() {
    let v = json(&["phase-group", "gbit-3-2", "Z"]);
    assert_eq!(v["order"], 8);
    assert_eq!(v["abelian"], false);
    assert_eq!(v["maximality_verified"], true);
    assert_eq!(v["maximal_measurement"], true);
    assert_eq!(v["elements"].as_array().unwrap().len(), 8);
    assert_eq!(v["elements"][0], "()");
    let v = json(&["phase-group", "gbit-3-2", "Z", "--exclude-reflections"]);
    assert_eq!(v["order"], 4);
    assert_eq!(v["abelian"], true);
    let v = json(&["phase-group", "classical-2", "M0"]);
    assert_eq!(v["trivial"], true);
    let v = json(&["phase-group", "gbit-3-2", "unit"]);
    assert_eq!(v["maximal_measurement"], false);
}

#[test]
fn interfere_without_symbolic_rows() {
    let o = gpt(&["interfere", "spekkens", "diagonal"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no non-trivial interference"));
    let v = json(&["interfere", "spekkens", "diagonal"]);
    assert_eq!(v["partition"], Value::Null);
    assert!(v["rows"][0]["numeric"].is_array());
    let v = json(&["interfere", "classical-2", "M0"]);
    assert_eq!(v["beamsplitter"], "identity");
    assert_eq!(v["nontrivial"], false);
}

#[test]
fn verify_theorem_suite() {
    let o = gpt(&["verify-theorem"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.ends_with("summary: 8/8 pass\n"), "{text}");
    let v = json(&["verify-theorem", "--theories", "classical-2,gbit-3-2"]);
    assert_eq!(v["total"], 2);
    assert_eq!(v["theories"][0]["phase_dynamics"], "trivial");
    assert_eq!(v["theories"][1]["canonical_map"]["witness"].as_array().unwrap().len(), 2);
    let csv = stdout(&gpt(&["verify-theorem", "--theories", "classical-2", "--format", "csv"]));
    assert_eq!(csv.lines().next().unwrap(), "theory,classical,measurement,phase_group_order,witness_a,witness_b,pass");
}

#[test]
fn theory_show_spekkens() {
    let v = json(&["theory", "show", "spekkens"]);
    assert_eq!(v["vertex_count"], 6);
    assert_eq!(v["ontic_vertex_count"], 4);
    assert_eq!(v["affine_dimension"], 3);
    assert_eq!(v["allowed_group_order"], 24);
    let v = json(&["theory", "show", "gbit-2-3"]);
    assert_eq!(v["vertex_count"], 9);
    assert_eq!(v["distinguishable"], 3);
    assert_eq!(v["ontic_vertex_count"], Value::Null);
}

#[test]
fn qubit_commands() {
    let v = json(&["qubit", "mzi", "--phi", "0"]);
    assert_eq!(v["p_plus"], 1.0);
    assert_eq!(v["p_minus"], 0.0);
    let v = json(&["qubit", "mzi", "--phi", "3.14159265358979", "--lambda", "2,-1,0.5,3"]);
    assert_eq!(v["p_plus"], 0.0);
    assert_eq!(v["within_tolerance"], true);
    let v = json(&["qubit", "effects", "--alpha", "0", "--beta", "0"]);
    let e: Vec<f64> = v["e"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(e, vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
    let v = json(&["qubit", "tprob", "--alpha", "0.4", "--beta", "1", "--gauge", "0.5,0.25,0.25", "--seed", "3"]);
    assert_eq!(v["gauge_independent"], true);
    assert_eq!(v["induced_rotation"], true);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 6);
}
