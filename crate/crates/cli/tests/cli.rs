//! End-to-end runs of the `sepgraph` binary: document shapes, exit codes,
//! and the determinism contract.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;

use sepgraph_cli::gen;
use sepgraph_cli::io::GraphDoc;

fn sepgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sepgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write_parallel_fixture(dir: &Path) -> String {
    let path = dir.join("parallel.json");
    fs::write(
        &path,
        r#"{"vertices":[{"id":"v","mu":1},{"id":"a","mu":1},{"id":"b","mu":2},{"id":"w","mu":1}],
            "edges":[["v","a"],["a","w"],["v","b"],["b","w"]]}"#,
    )
    .unwrap();
    path.to_str().unwrap().to_owned()
}

fn write_grid_cloud(dir: &Path) -> String {
    let path = dir.join("grid.csv");
    let mut text = String::from("x1,x2,mass\n");
    for i in 0..3 {
        for j in 0..3 {
            text.push_str(&format!("{},{},1.0\n", 0.5 * i as f64, 0.5 * j as f64));
        }
    }
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn analyze_reports_the_parallel_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_parallel_fixture(dir.path());
    let out = sepgraph(&["analyze", "--graph", &graph, "--v", "v", "--w", "w", "--set", "a,b"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["width"], 1);
    assert_eq!(doc["sr"], 3.0);
    assert_eq!(doc["mass"], 3.0);
    assert_eq!(doc["separating"], true);
    assert_eq!(doc["positions"]["v"], 0);
    assert_eq!(doc["positions"]["a"], 1);
}

#[test]
fn modulus_at_exponent_one_matches_mincut() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_parallel_fixture(dir.path());
    let cut = stdout_json(&sepgraph(&["mincut", "--graph", &graph, "--v", "v", "--w", "w"]));
    let modulus = stdout_json(&sepgraph(&[
        "modulus", "--graph", &graph, "--v", "v", "--w", "w", "--p", "1",
    ]));
    assert_eq!(cut["cut_value"], modulus["modulus"]);
    assert_eq!(modulus["gap"], 0.0);
    let alpha_sum: f64 = cut["pencil"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["alpha"].as_f64().unwrap())
        .sum();
    assert!((alpha_sum - 1.0).abs() < 1e-12);
}

#[test]
fn fibrate_splits_a_two_width_set() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.json");
    fs::write(
        &path,
        r#"{"vertices":[{"id":"v","mu":1},{"id":"a","mu":1},{"id":"b","mu":3},{"id":"w","mu":1}],
            "edges":[["v","a"],["a","b"],["b","w"]]}"#,
    )
    .unwrap();
    let out = sepgraph(&[
        "fibrate", "--graph", path.to_str().unwrap(), "--v", "v", "--w", "w", "--set", "a,b",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["width"], 2);
    assert_eq!(doc["levels"], serde_json::json!([["a"], ["b"]]));
    assert_eq!(doc["chosen"], 0);
}

#[test]
fn slim_flags_a_fat_set_and_slims_it() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.json");
    fs::write(
        &path,
        r#"{"vertices":[{"id":"v","mu":1},{"id":"a","mu":1},{"id":"b","mu":3},{"id":"w","mu":1}],
            "edges":[["v","a"],["a","b"],["b","w"]]}"#,
    )
    .unwrap();
    let out = sepgraph(&[
        "slim", "--graph", path.to_str().unwrap(), "--v", "v", "--w", "w", "--set", "a,b",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["slim"], false);
    assert_eq!(doc["witness"], "b");
    assert_eq!(doc["slimmed"], serde_json::json!(["a"]));
    assert_eq!(doc["slimmed_mass"], 1.0);
}

#[test]
fn validation_failures_exit_one_with_error_json() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_parallel_fixture(dir.path());
    let missing = sepgraph(&["mincut", "--graph", "/nonexistent.json", "--v", "v", "--w", "w"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(stdout_json(&missing)["error"].is_string());

    let unknown = sepgraph(&["mincut", "--graph", &graph, "--v", "v", "--w", "zz"]);
    assert_eq!(unknown.status.code(), Some(1));
    assert!(stdout_json(&unknown)["error"]
        .as_str()
        .unwrap()
        .contains("zz"));

    let flag = sepgraph(&["mincut", "--graph", &graph, "--v", "v"]);
    assert_eq!(flag.status.code(), Some(1));
    assert!(stdout_json(&flag)["error"].is_string());
}

#[test]
fn computation_failures_exit_two_with_error_json() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_parallel_fixture(dir.path());
    let not_separating = sepgraph(&[
        "fibrate", "--graph", &graph, "--v", "v", "--w", "w", "--set", "a",
    ]);
    assert_eq!(not_separating.status.code(), Some(2));
    assert!(stdout_json(&not_separating)["error"].is_string());

    let split = dir.path().join("split.json");
    fs::write(
        &split,
        r#"{"vertices":[{"id":"v","mu":1},{"id":"w","mu":1}],"edges":[]}"#,
    )
    .unwrap();
    let no_path = sepgraph(&[
        "modulus", "--graph", split.to_str().unwrap(), "--v", "v", "--w", "w", "--p", "2",
    ]);
    assert_eq!(no_path.status.code(), Some(2));
    assert!(stdout_json(&no_path)["error"].is_string());
}

#[test]
fn schema_flag_documents_every_format() {
    let out = sepgraph(&["--schema"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for key in [
        "analyze", "fibrate", "slim", "mincut", "modulus", "pencil", "discretize",
        "experiment", "verify", "cut_value", "r,width,sr_over_r,cut_over_r",
    ] {
        assert!(text.contains(key), "schema lacks {key}");
    }
}

#[test]
fn discretize_emits_a_loadable_net_graph() {
    let dir = tempfile::tempdir().unwrap();
    let cloud = write_grid_cloud(dir.path());
    let out = sepgraph(&[
        "discretize", "--cloud", &cloud, "--v", "0", "--w", "8", "--r", "0.4", "--set",
        "box:0.4,0.6,-1,2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let doc = stdout_json(&out);
    assert_eq!(doc["net_size"], 9);
    assert_eq!(doc["r"], 0.4);
    let back: GraphDoc = serde_json::from_value(doc["graph"].clone()).unwrap();
    let net_graph = back.to_graph().unwrap();
    assert_eq!(net_graph.vertex_count(), 9);
    let terminals = doc["terminals"].as_array().unwrap();
    assert_ne!(terminals[0], terminals[1]);
}

#[test]
fn experiment_csv_layout_and_merged_terminals() {
    let dir = tempfile::tempdir().unwrap();
    let cloud = write_grid_cloud(dir.path());
    let out = sepgraph(&[
        "experiment", "--cloud", &cloud, "--v", "0", "--w", "8", "--r", "0.4,0.3", "--set",
        "half:1,0,0.6",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("# "));
    let meta: Value = serde_json::from_str(&lines[0][2..]).unwrap();
    assert_eq!(meta["schedule"], serde_json::json!([0.4, 0.3]));
    assert_eq!(lines[1], "r,width,sr_over_r,cut_over_r");

    let merged = sepgraph(&[
        "experiment", "--cloud", &cloud, "--v", "0", "--w", "8", "--r", "5", "--set", "ids:4",
    ]);
    assert_eq!(merged.status.code(), Some(2));
    assert!(stdout_json(&merged)["error"]
        .as_str()
        .unwrap()
        .contains("same net vertex"));
}

#[test]
fn riesz_weighting_needs_l_and_merges_into_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let cloud = write_grid_cloud(dir.path());
    let missing = sepgraph(&[
        "discretize", "--cloud", &cloud, "--v", "0", "--w", "8", "--r", "0.4", "--set", "ids:4",
        "--weighting", "riesz",
    ]);
    assert_eq!(missing.status.code(), Some(1));
    let ok = sepgraph(&[
        "discretize", "--cloud", &cloud, "--v", "0", "--w", "8", "--r", "0.4", "--set", "ids:4",
        "--weighting", "riesz", "--L", "2",
    ]);
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stdout));
    let doc = stdout_json(&ok);
    assert_eq!(doc["weighting"]["riesz"]["L"], 2.0);
}

#[test]
fn out_flag_writes_the_same_document() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_parallel_fixture(dir.path());
    let to_stdout = sepgraph(&["mincut", "--graph", &graph, "--v", "v", "--w", "w"]);
    let out_path = dir.path().join("cut.json");
    let to_file = sepgraph(&[
        "mincut", "--graph", &graph, "--v", "v", "--w", "w", "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    assert_eq!(fs::read(&out_path).unwrap(), to_stdout.stdout);
}

#[test]
fn verify_is_byte_identical_across_runs() {
    let args = ["verify", "--seed", "7", "--max-vertices", "6", "--samples", "30"];
    let first = sepgraph(&args);
    let second = sepgraph(&args);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stdout));
    assert_eq!(first.stdout, second.stdout);
    let report = stdout_json(&first);
    assert_eq!(report["failures"], 0);
    assert_eq!(report["counterexample"], Value::Null);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Writing a graph out and reading it back must preserve structure,
    // masses, and labels regardless of how the graph was produced.
    #[test]
    fn graph_documents_survive_a_disk_round_trip(seed in 0u64..1_000, n in 1usize..10, extra in 0usize..8) {
        let mut rng = gen::rng_for(seed);
        let graph = gen::random_connected_graph(&mut rng, n, extra);
        let text = serde_json::to_string(&GraphDoc::from_graph(&graph)).unwrap();
        let parsed: GraphDoc = serde_json::from_str(&text).unwrap();
        let back = parsed.to_graph().unwrap();
        prop_assert_eq!(back.vertex_count(), graph.vertex_count());
        prop_assert_eq!(back.edges(), graph.edges());
        for z in 0..graph.vertex_count() {
            prop_assert_eq!(back.label(z), graph.label(z));
            prop_assert_eq!(back.mu(z), graph.mu(z));
        }
    }
}
