//! End-to-end tests that drive the compiled `mbqc` binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const COUNTEREXAMPLE: &str = "\
vertices: v1 v2 v3 v4 v5 v6
edge: v1 v2
edge: v1 v6
edge: v2 v6
edge: v2 v5
edge: v6 v4
edge: v3 v4
edge: v3 v5
edge: v4 v5
inputs: v1
outputs: v5 v6
";

const GRID: &str = "\
vertices: a0 a1 a2 b0 b1 b2
edge: a0 a1
edge: a1 a2
edge: b0 b1
edge: b1 b2
edge: a0 b0
edge: a1 b1
edge: a2 b2
";

const TRIANGLE: &str = "\
vertices: a b c
edge: a b
edge: b c
edge: a c
inputs: a
outputs: c
";

const PATH2: &str = "\
vertices: a b
edge: a b
inputs: a
outputs: b
";

const PATH4: &str = "\
vertices: w x y z
edge: w x
edge: x y
edge: y z
inputs: w
outputs: z
";

fn write_graph(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn mbqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbqc"))
        .args(args)
        .output()
        .expect("the binary should launch")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_str(&stdout_of(out)).expect("stdout should be valid JSON")
}

#[test]
fn analyze_reports_the_counterexample_as_equiprobable_without_gflow() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "ce.graph", COUNTEREXAMPLE);
    let out = mbqc(&["analyze", "-g", graph.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("gflow: absent"), "{text}");
    assert!(text.contains("equiprobable: yes"), "{text}");
    assert!(text.contains("constant probability: yes"), "{text}");
    assert!(text.contains("agrees with the classification"), "{text}");
}

#[test]
fn analyze_reports_the_edge_as_fully_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "p2.graph", PATH2);
    let out = mbqc(&["analyze", "-g", graph.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["report"]["has_gflow"], Value::Bool(true));
    assert_eq!(v["report"]["equiprobable"], Value::Bool(true));
    assert_eq!(v["report"]["constant_probability"], Value::Bool(true));
    assert_eq!(v["sim_check"]["agrees_with_classification"], Value::Bool(true));
    let residual = v["sim_check"]["strong_determinism_residual"].as_f64().unwrap();
    assert!(residual <= 1e-9, "residual {residual}");
}

#[test]
fn analyze_flags_the_triangle_as_input_dependent() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "tri.graph", TRIANGLE);
    let out = mbqc(&["analyze", "-g", graph.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["report"]["has_gflow"], Value::Bool(false));
    assert_eq!(v["report"]["equiprobable"], Value::Bool(false));
    assert_eq!(v["report"]["constant_probability"], Value::Bool(false));
    assert_eq!(v["sim_check"]["equiprobable"], Value::Bool(false));
    assert_eq!(v["sim_check"]["constant_probability"], Value::Bool(false));
    assert_eq!(v["sim_check"]["agrees_with_classification"], Value::Bool(true));
    let sets = v["report"]["internal_sets"].as_array().unwrap();
    assert!(!sets.is_empty());
    assert_eq!(sets[0], serde_json::json!(["a", "b"]));
}

#[test]
fn graph_json_output_loads_back_as_graph_input() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "ce.graph", COUNTEREXAMPLE);
    let out = mbqc(&["analyze", "-g", graph.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);

    let json_path = dir.path().join("ce.json");
    fs::write(&json_path, serde_json::to_string(&v["graph"]).unwrap()).unwrap();
    let again = mbqc(&["classify", "-g", json_path.to_str().unwrap(), "--json"]);
    assert!(again.status.success(), "stderr: {}", stderr_of(&again));
    let report = json_of(&again);
    assert_eq!(report["has_gflow"], Value::Bool(false));
    assert_eq!(report["equiprobable"], Value::Bool(true));
}

#[test]
fn gflow_emits_reparsable_layers_for_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "p4.graph", PATH4);
    let out = mbqc(&["gflow", "-g", graph.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["has_gflow"], Value::Bool(true));
    let layers = v["gflow"]["layers"].as_object().unwrap();
    assert_eq!(layers.len(), 4);
    assert_eq!(layers["z"], serde_json::json!(0));
    let g = v["gflow"]["g"].as_object().unwrap();
    assert_eq!(g.len(), 3, "three measured vertices carry correction sets");
}

#[test]
fn gflow_says_absent_for_the_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "ce.graph", COUNTEREXAMPLE);
    let out = mbqc(&["gflow", "-g", graph.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("gflow: absent"));
}

#[test]
fn choose_io_finds_three_grid_classes_at_size_two() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "grid.graph", GRID);
    let out = mbqc(&["choose-io", "-g", graph.to_str().unwrap(), "-k", "2", "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["raw_count"], serde_json::json!(22));
    let placements = v["placements"].as_array().unwrap();
    assert_eq!(placements.len(), 3);
    let inputs: Vec<Vec<String>> = placements
        .iter()
        .map(|p| {
            p["inputs"]
                .as_array()
                .unwrap()
                .iter()
                .map(|s| s.as_str().unwrap().to_string())
                .collect()
        })
        .collect();
    assert_eq!(
        inputs,
        vec![
            vec!["a0".to_string(), "a1".to_string()],
            vec!["a0".to_string(), "b0".to_string()],
            vec!["a0".to_string(), "b1".to_string()],
        ]
    );
    assert!(placements.iter().all(|p| p["has_gflow"] == Value::Bool(true)));
}

#[test]
fn choose_io_lists_every_orbit_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "grid.graph", GRID);
    let out = mbqc(&[
        "choose-io",
        "-g",
        graph.to_str().unwrap(),
        "-k",
        "2",
        "--all-orbits",
        "--json",
    ]);
    assert!(out.status.success());
    let v = json_of(&out);
    let placements = v["placements"].as_array().unwrap();
    assert_eq!(placements.len(), 22);
    let reps = placements
        .iter()
        .filter(|p| p["representative"] == Value::Bool(true))
        .count();
    assert_eq!(reps, 6, "six (I, O) pair classes");
    let mut classes: Vec<u64> = placements
        .iter()
        .map(|p| p["class"].as_u64().unwrap())
        .collect();
    classes.sort();
    classes.dedup();
    assert_eq!(classes, vec![0, 1, 2, 3, 4, 5]);
}

#[test]
fn choose_io_reports_no_single_vertex_placement_on_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "grid.graph", GRID);
    let out = mbqc(&["choose-io", "-g", graph.to_str().unwrap(), "-k", "1", "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["placements"].as_array().unwrap().len(), 0);
}

#[test]
fn choose_io_rejects_oversized_placements_with_the_cap_code() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "grid.graph", GRID);
    let out = mbqc(&["choose-io", "-g", graph.to_str().unwrap(), "-k", "7"]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr_of(&out));
}

#[test]
fn choose_io_warns_that_existing_io_lines_are_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "p2.graph", PATH2);
    let out = mbqc(&["choose-io", "-g", graph.to_str().unwrap(), "-k", "1"]);
    assert!(out.status.success());
    assert!(stderr_of(&out).contains("ignored"));
}

#[test]
fn witness_refuses_when_the_computation_is_equiprobable() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "ce.graph", COUNTEREXAMPLE);
    let out = mbqc(&["witness", "-g", graph.to_str().unwrap(), "--equi"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr_of(&out).contains("equiprobable"));
}

#[test]
fn witness_confirms_the_triangle_bias_numerically() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "tri.graph", TRIANGLE);
    let out = mbqc(&["witness", "-g", graph.to_str().unwrap(), "--equi", "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["confirmed"], Value::Bool(true));
    let p = v["forbidden_probabilities"][0].as_f64().unwrap();
    assert!(p < 1e-9, "forbidden probability {p}");
    assert_eq!(v["witnesses"][0]["forbidden_parity"], serde_json::json!(1));
    assert_eq!(v["witnesses"][0]["paulis"]["a"], serde_json::json!("Y"));
    assert_eq!(v["witnesses"][0]["paulis"]["b"], serde_json::json!("Y"));
}

#[test]
fn witness_builds_a_distinguishing_pair_for_the_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "tri.graph", TRIANGLE);
    let out = mbqc(&["witness", "-g", graph.to_str().unwrap(), "--const", "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["confirmed"], Value::Bool(true));
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 2);
    let gap = v["input_dependence_gap"].as_f64().unwrap();
    assert!(gap >= 0.05, "gap {gap}");
    let a = v["witnesses"][0]["forbidden_parity"].as_u64().unwrap();
    let b = v["witnesses"][1]["forbidden_parity"].as_u64().unwrap();
    assert_eq!(a ^ b, 1, "the pair forbids opposite parities");
}

#[test]
fn simulate_certifies_strong_determinism_on_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "p4.graph", PATH4);
    let out = mbqc(&["simulate", "-g", graph.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["used_gflow_corrections"], Value::Bool(true));
    assert_eq!(v["strong_determinism"]["holds"], Value::Bool(true));
    assert_eq!(v["equiprobable"], Value::Bool(true));
    assert_eq!(v["constant_probability"], Value::Bool(true));
    let branches = v["table"]["branches"].as_array().unwrap();
    assert_eq!(branches.len(), 8, "three measured vertices");
    let total: f64 = branches.iter().map(|b| b["probability"].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-9);
    assert!(branches[0]["matrix"].is_null(), "matrices stay off by default");
}

#[test]
fn simulate_emits_matrices_only_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "p2.graph", PATH2);
    let out = mbqc(&["simulate", "-g", graph.to_str().unwrap(), "--json", "--matrices"]);
    assert!(out.status.success());
    let v = json_of(&out);
    let matrix = v["table"]["branches"][0]["matrix"].as_array().unwrap();
    assert_eq!(matrix.len(), 4, "2x2 branch map, flattened");
}

#[test]
fn simulate_is_reproducible_for_a_fixed_seed_and_diverges_otherwise() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "p4.graph", PATH4);
    let path = graph.to_str().unwrap();
    let a = stdout_of(&mbqc(&["simulate", "-g", path, "--json", "--seed", "7"]));
    let b = stdout_of(&mbqc(&["simulate", "-g", path, "--json", "--seed", "7"]));
    let c = stdout_of(&mbqc(&["simulate", "-g", path, "--json", "--seed", "8"]));
    assert_eq!(a, b);
    let angles_a = serde_json::from_str::<Value>(&a).unwrap()["plan"]["angles"].clone();
    let angles_c = serde_json::from_str::<Value>(&c).unwrap()["plan"]["angles"].clone();
    assert_ne!(angles_a, angles_c);
}

#[test]
fn export_dot_highlights_the_gflow_dag() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "p2.graph", PATH2);
    let out = mbqc(&["export-dot", "-g", graph.to_str().unwrap(), "--highlight", "gflow"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("digraph"), "{text}");
    assert!(text.contains("crimson"), "the correction arc is colored: {text}");
}

#[test]
fn export_dot_warns_but_succeeds_without_a_gflow() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "ce.graph", COUNTEREXAMPLE);
    let out = mbqc(&["export-dot", "-g", graph.to_str().unwrap(), "--highlight", "gflow"]);
    assert!(out.status.success());
    assert!(!stdout_of(&out).contains("crimson"));
    assert!(stderr_of(&out).contains("no gflow"));
}

#[test]
fn malformed_graphs_exit_with_the_parse_code() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(&dir, "bad.graph", "vertices: a b\nedge: a q\n");
    let out = mbqc(&["classify", "-g", graph.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("error:"));
}

#[test]
fn missing_files_exit_with_the_parse_code() {
    let out = mbqc(&["classify", "-g", "/nonexistent/nope.graph"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_simulations_exit_with_the_cap_code() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("vertices:");
    for i in 0..22 {
        text.push_str(&format!(" q{i}"));
    }
    text.push('\n');
    for i in 0..21 {
        text.push_str(&format!("edge: q{i} q{}\n", i + 1));
    }
    text.push_str("inputs: q0\noutputs: q21\n");
    let graph = write_graph(&dir, "long.graph", &text);
    let out = mbqc(&["simulate", "-g", graph.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr_of(&out));
}
