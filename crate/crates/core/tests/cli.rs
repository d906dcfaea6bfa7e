use std::path::Path;
use std::process::{Command, Output};

use ising_select::Graph;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ising-select"))
        .args(args)
        .env("ISING_SELECT_WORKERS", "1")
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn pipeline_from_graph_to_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("graph.json");
    let model = dir.path().join("model.json");
    let samples = dir.path().join("samples.csv");
    let estimate = dir.path().join("estimate.json");
    let stats = dir.path().join("stats.csv");

    let out = bin(&["gen-graph", "--kind", "cycle", "--p", "8", "--out", path_str(&graph)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = bin(&[
        "gen-model", "--graph", path_str(&graph), "--j-min", "0.4", "--j-max", "0.5", "--seed", "3", "--out",
        path_str(&model),
    ]);
    assert!(out.status.success());
    let out = bin(&["sample", "--model", path_str(&model), "--n", "20000", "--exact", "--seed", "4", "--out", path_str(&samples)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = bin(&[
        "learn", "--samples", path_str(&samples), "--eta", "2", "--xi", "0.15", "--out", path_str(&estimate),
        "--stats-out", path_str(&stats),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let truth = Graph::read_json(&graph).unwrap();
    assert_eq!(Graph::read_json(&estimate).unwrap(), truth);
    let table = std::fs::read_to_string(&stats).unwrap();
    assert!(table.starts_with("i,j,best_S,statistic"));
    assert_eq!(table.lines().count(), 1 + 8 * 7 / 2);

    let out = bin(&["eval", "--truth", path_str(&graph), "--estimate", path_str(&estimate)]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["raw"], 0);
    assert_eq!(v["normalized"].as_f64(), Some(0.0));
}

#[test]
fn separators_report() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("cycle.json");
    assert!(bin(&["gen-graph", "--kind", "cycle", "--p", "10", "--out", path_str(&graph)]).status.success());
    let v = json(&bin(&["separators", "--graph", path_str(&graph), "--eta", "2", "--gamma", "4"]));
    assert_eq!(v["holds"], true);
    let v = json(&bin(&["separators", "--graph", path_str(&graph), "--eta", "1", "--gamma", "5"]));
    assert_eq!(v["holds"], false);
}

#[test]
fn bounds_for_sparse_random_graphs() {
    let out = bin(&["bounds", "--family", "erdos_renyi", "--p", "1e6", "--c", "2", "--l", "4", "--j-max", "0.2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!((v["j_star"].as_f64().unwrap() - 0.5f64.atanh()).abs() < 1e-9);
    assert!(v["nu_max_bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn failures_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    assert_eq!(bin(&["learn", "--samples", path_str(&missing)]).status.code(), Some(2));
    assert_eq!(bin(&["learn"]).status.code(), Some(1));
    assert_eq!(bin(&["gen-graph", "--kind", "random_regular", "--p", "5", "--delta", "3"]).status.code(), Some(1));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn experiment_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        r#"{
            "ensembles": [{"kind": "cycle", "p": 10}],
            "param_spec": {"j_min": 0.3, "j_max": 0.4, "sign_mode": "mixed", "seed": 0},
            "sample_sizes": [200],
            "methods": ["CVDT"],
            "trials": 2
        }"#,
    )
    .unwrap();
    let out_dir = dir.path().join("run");
    let out = bin(&["experiment", "--config", path_str(&config), "--out", path_str(&out_dir), "--seed", "9"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let results = std::fs::read_to_string(out_dir.join("results.csv")).unwrap();
    assert_eq!(results.lines().count(), 3);
    assert!(out_dir.join("summary.csv").exists());
    assert!(out_dir.join("curves/cycle_cvdt.csv").exists());
}
