//! End-to-end tests of the `searchstop` binary: exit codes, artifact
//! emission, and reproducibility through the full pipeline.

use std::path::Path;
use std::process::{Command, Output};

fn searchstop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_searchstop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, budget: f64, replications: usize, seed: u64) -> std::path::PathBuf {
    let path = dir.join("exp.toml");
    let text = format!(
        r#"version = 1

[instance]
preset = "sec5"
n = 6
m = 3
eps = 0.1
cost_mean = 0.5
bernoulli_costs = true

[run]
policies = ["cucb-v", "cucb"]
budget = {budget}
replications = {replications}
seed = {seed}
checkpoints = 6
"#
    );
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn oracle_subcommand_prints_text_and_record() {
    let out = searchstop(&[
        "oracle",
        "--edgeless",
        "2",
        "--w",
        "0.5,0.5",
        "--c",
        "0.25,1.0",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("search:         (1)"), "{stdout}");
    assert!(stdout.contains("cut_index:      1"), "{stdout}");
    let json_line = stdout.lines().last().unwrap();
    let record: serde_json::Value = serde_json::from_str(json_line).unwrap();
    assert_eq!(record["search"], serde_json::json!([1]));
    assert_eq!(record["cut_index"], serde_json::json!(1));
    assert_eq!(record["j_plus"], serde_json::json!(0.5));
    assert_eq!(record["degenerate"], serde_json::json!(false));
}

#[test]
fn oracle_subcommand_reads_dag_files() {
    let dir = tempfile::tempdir().unwrap();
    let dag_path = dir.path().join("chain3.dag");
    std::fs::write(&dag_path, "# chain\n3\n1 2\n2 3\n").unwrap();
    let out = searchstop(&[
        "oracle",
        "--dag",
        dag_path.to_str().unwrap(),
        "--w",
        "0.2,0.3,0.5",
        "--c",
        "0.5,0.5,0.5",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("full_extension: (1 2 3)"), "{stdout}");
}

#[test]
fn oracle_argument_errors_exit_2() {
    // both --dag and --edgeless missing
    let out = searchstop(&["oracle", "--w", "1.0", "--c", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    // dimension mismatch
    let out = searchstop(&["oracle", "--edgeless", "3", "--w", "1.0", "--c", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown strategy
    let out = searchstop(&[
        "oracle",
        "--edgeless",
        "2",
        "--w",
        "0.5,0.5",
        "--c",
        "0.5,0.5",
        "--strategy",
        "magic",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("strategy"), "{err}");
}

#[test]
fn simulate_writes_artifacts_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), 80.0, 3, 11);
    let out1 = dir.path().join("out1");
    let out2 = dir.path().join("out2");
    for out_dir in [&out1, &out2] {
        let out = searchstop(&[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
            "--jobs",
            "2",
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        for file in ["runs.csv", "curve.csv", "regret.svg", "config.toml"] {
            assert!(out_dir.join(file).exists(), "{file} missing");
        }
    }
    // same config, same seed: byte-identical CSV output
    for file in ["runs.csv", "curve.csv"] {
        let a = std::fs::read(out1.join(file)).unwrap();
        let b = std::fs::read(out2.join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical runs");
    }
}

#[test]
fn out_dir_env_override_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), 40.0, 1, 5);
    let env_out = dir.path().join("from-env");
    let out = Command::new(env!("CARGO_BIN_EXE_searchstop"))
        .args(["simulate", "--config", cfg.to_str().unwrap()])
        .env("SEARCHSTOP_OUT", &env_out)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(env_out.join("runs.csv").exists());
}

#[test]
fn missing_config_exits_2() {
    let out = searchstop(&["simulate", "--config", "/nonexistent/cfg.toml"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("config"), "{err}");

    let out = searchstop(&["simulate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_preset_exits_2() {
    let out = searchstop(&["preset", "sec5-galaxy"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("preset"), "{err}");
}

#[test]
fn preset_with_overrides_runs_small() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("results");
    let out = searchstop(&[
        "preset",
        "two-path",
        "--budget",
        "120",
        "--replications",
        "2",
        "--seed",
        "3",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("final mean regret proxy"), "{stdout}");
    assert!(out_dir.join("curve.csv").exists());
}

#[test]
fn sweep_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), 50.0, 2, 9);
    let out_dir = dir.path().join("sweep-out");
    let out = searchstop(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--key",
        "budget",
        "--values",
        "40,80",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out_dir.join("budget-40").join("curve.csv").exists());
    assert!(out_dir.join("budget-80").join("curve.csv").exists());
    let summary = std::fs::read_to_string(out_dir.join("sweep_summary.csv")).unwrap();
    assert!(
        summary.starts_with("key,value,policy,final_budget"),
        "{summary}"
    );
    // 2 values x 2 policies
    assert_eq!(summary.lines().count(), 1 + 4, "{summary}");

    // unknown sweep key names itself in the diagnostic
    let out = searchstop(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--key",
        "warp",
        "--values",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("warp"));
}
