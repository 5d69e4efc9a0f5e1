mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use genesim::DecisionTree;

fn genesim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genesim"))
        .args(args)
        .env_remove("GENESIM_SEED")
        .output()
        .unwrap()
}

fn iris_path() -> String {
    common::data_dir().join("iris.csv").display().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn induce_prints_a_tree() {
    let out = genesim(&["induce", "--data", &iris_path(), "--label", "species", "--criterion", "gini"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let tree = DecisionTree::deserialize(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!(stderr(&out).contains(&format!("node_count={}", tree.node_count())));
}

#[test]
fn bogus_criterion_lists_the_valid_ones() {
    let out = genesim(&["induce", "--data", &iris_path(), "--label", "species", "--criterion", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("gini") && err.contains("entropy"), "{err}");
}

#[test]
fn missing_data_file_names_the_path() {
    let out = genesim(&["induce", "--data", "/nonexistent/flowers.csv", "--label", "species"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/nonexistent/flowers.csv"));
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_flags_are_usage_errors() {
    assert_eq!(genesim(&["induce", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(genesim(&[]).status.code(), Some(2));
    assert_eq!(genesim(&["--help"]).status.code(), Some(0));
}

#[test]
fn zero_iterations_is_rejected() {
    let out = genesim(&["genesim", "--data", &iris_path(), "--label", "species", "--iterations", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn genesim_is_reproducible_and_small_on_iris() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let args = ["genesim", "--data", &iris_path(), "--label", "species", "--seed", "3"];
    let mut with_trace = args.to_vec();
    with_trace.extend(["--trace", trace.to_str().unwrap()]);
    let a = genesim(&with_trace);
    let b = genesim(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let tree = DecisionTree::deserialize(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
    assert!(tree.node_count() < 20);
    assert!(stderr(&a).contains("holdout_accuracy="));
    let rows = fs::read_to_string(&trace).unwrap();
    assert!(rows.starts_with("iteration,best_accuracy,best_node_count,mean_accuracy\n"));
    assert_eq!(rows.lines().count(), 1 + 21);
}

#[test]
fn seed_falls_back_to_the_environment() {
    let base = ["genesim", "--data", &iris_path(), "--label", "species", "--iterations", "2"];
    let flag = genesim(&[&base[..], &["--seed", "11"]].concat());
    let env = Command::new(env!("CARGO_BIN_EXE_genesim"))
        .args(base)
        .env("GENESIM_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(flag.status.code(), Some(0));
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn merge_two_trees() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, args: &[&str]| {
        let out = genesim(args);
        assert_eq!(out.status.code(), Some(0));
        let path = dir.path().join(name);
        fs::write(&path, out.stdout).unwrap();
        path.display().to_string()
    };
    let a = write("a.json", &["induce", "--data", &iris_path(), "--label", "species"]);
    let b = write(
        "b.json",
        &["induce", "--data", &iris_path(), "--label", "species", "--criterion", "entropy", "--max-depth", "2"],
    );
    let merged = genesim(&["merge", &a, &b, "--features", "4"]);
    assert_eq!(merged.status.code(), Some(0), "{}", stderr(&merged));
    DecisionTree::deserialize(&String::from_utf8(merged.stdout).unwrap()).unwrap();
    let regions = genesim(&["merge", &a, &b, "--features", "4", "--regions"]);
    let rs = genesim::RegionSet::from_json(&String::from_utf8(regions.stdout).unwrap()).unwrap();
    assert!(!rs.is_empty());
    assert_eq!(genesim(&["merge", &a, &b, "--features", "2"]).status.code(), Some(2));
}

fn write_config(dir: &Path, first_csv: &str) -> String {
    let data = common::data_dir();
    let config = serde_json::json!({
        "datasets": [
            {"name": "iris", "csv": first_csv, "label": "species"},
            {"name": "breast", "csv": data.join("breast.csv"), "label": "class"},
        ],
        "algorithms": [
            {"name": "tree", "kind": "single_tree"},
            {"name": "bagged", "kind": "bagged_committee", "parameters": {"rounds": 3}},
            {"name": "genesim", "kind": "genesim",
             "parameters": {"ga": {"population_size": 8, "iterations": 3, "offspring_per_iteration": 8},
                            "ensemble": {"bagging_rounds": 3, "boosting_rounds": 1}}},
        ],
        "n_folds": 3,
        "n_repeats": 2,
        "seed": 5,
        "output": "out",
        "resamples": 500,
    });
    let path = dir.join("experiment.json");
    fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    path.display().to_string()
}

#[test]
fn benchmark_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &iris_path());
    let out = genesim(&["benchmark", "--config", &config]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let output = dir.path().join("out");
    let mut files: Vec<String> = fs::read_dir(&output)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    files.sort();
    assert_eq!(files, ["accuracy.csv", "complexity.csv", "results.json", "wtl.csv"]);
    let first = fs::read(output.join("results.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(doc["report"]["cells"].as_array().unwrap().len(), 6);
    assert_eq!(stderr(&out).lines().filter(|l| l.starts_with('[')).count(), 6);

    let other = dir.path().join("again");
    let rerun = genesim(&["benchmark", "--config", &config, "--output", other.to_str().unwrap()]);
    assert_eq!(rerun.status.code(), Some(0));
    assert_eq!(first, fs::read(other.join("results.json")).unwrap());
}

#[test]
fn benchmark_with_a_missing_csv_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "missing.csv");
    let out = genesim(&["benchmark", "--config", &config]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("missing.csv"));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn benchmark_rejects_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"datasets": [], "algorithms": []}"#).unwrap();
    assert_eq!(genesim(&["benchmark", "--config", path.to_str().unwrap()]).status.code(), Some(2));
    fs::write(&path, "not json").unwrap();
    assert_eq!(genesim(&["benchmark", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn manifest_supplies_label_and_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("iris.manifest.json");
    fs::write(
        &manifest,
        r#"{"species": {"label_column": true}, "sepal_width": {"kind": "discrete"}}"#,
    )
    .unwrap();
    let out = genesim(&["induce", "--data", &iris_path(), "--manifest", manifest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let two_labels = dir.path().join("bad.json");
    fs::write(&two_labels, r#"{"species": {"label_column": true}, "petal_width": {"label_column": true}}"#).unwrap();
    let out = genesim(&["induce", "--data", &iris_path(), "--manifest", two_labels.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
