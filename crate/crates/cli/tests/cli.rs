//! The `trace` binary driven as a subprocess.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn ebt() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/datasets/ebt")
}

fn trace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trace")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = trace(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn error_json(out: &Output) -> Value {
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr.lines().last().unwrap();
    serde_json::from_str::<Value>(line).unwrap()["error"].clone()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn eval_before_train_names_the_prerequisite() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let ds = ebt();
    let ds = ds.to_str().unwrap();
    for stage in ["ingest", "augment", "sample", "split"] {
        ok(&[stage, "--dataset", ds, "--out", out, "--seeds", "2014", "--template", "zero-shot-code"]);
    }
    let err = error_json(&trace(&["eval", "--dataset", ds, "--out", out, "--seeds", "2014", "--template", "zero-shot-code"]));
    assert_eq!(err["kind"], "missing_prerequisite");
    assert_eq!(err["prerequisite"], "train");
    assert_eq!(err["command"], "eval");
    assert!(err["message"].as_str().unwrap().contains("trace train"));
}

#[test]
fn stages_refuse_an_empty_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let err = error_json(&trace(&["augment", "--out", out]));
    assert_eq!(err["prerequisite"], "ingest");
    let err = error_json(&trace(&["report", "--out", out]));
    assert_eq!(err["kind"], "missing_prerequisite");
}

#[test]
fn missing_dataset_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = error_json(&trace(&["ingest", "--out", dir.path().to_str().unwrap()]));
    assert_eq!(err["kind"], "config");
    let err = error_json(&trace(&["ingest", "--dataset", "/no/such/dir", "--out", dir.path().to_str().unwrap()]));
    assert!(err["message"].as_str().unwrap().contains("does not exist"));
}

#[test]
fn full_run_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let ds = ebt();
    ok(&[
        "run",
        "--dataset",
        ds.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--seeds",
        "2014",
        "--dump-prompts",
    ]);
    let manifest = json(&out.join("manifest.json"));
    assert_eq!(manifest["seeds"], serde_json::json!([2014]));
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(
        manifest["stages"],
        serde_json::json!(["ingest", "augment", "sample", "split", "train", "eval", "baseline", "compare", "report"])
    );

    let cond = out.join("conditions/mock.zero-shot-code");
    let gens = std::fs::read_to_string(cond.join("generations.jsonl")).unwrap();
    assert_eq!(gens.lines().count(), 40);
    assert_eq!(std::fs::read_to_string(cond.join("prompts.jsonl")).unwrap().lines().count(), 40);
    let pairs = std::fs::read_to_string(out.join("conditions/none/seed-2014/pairs.jsonl")).unwrap();
    assert_eq!(pairs.lines().count(), 196);
    let split = json(&out.join("conditions/none/seed-2014/splits.json"));
    assert_eq!(split["test"].as_array().unwrap().len(), 19);
    let eval = json(&out.join("conditions/none/seed-2014/eval.json"));
    assert_eq!(eval["tp"].as_u64().unwrap() + eval["fp"].as_u64().unwrap() + eval["tn"].as_u64().unwrap() + eval["fn"].as_u64().unwrap(), 19);
    let baselines = json(&out.join("conditions/none/seed-2014/baselines.json"));
    assert_eq!(baselines.as_array().unwrap().len(), 6);

    let report = std::fs::read_to_string(out.join("report.md")).unwrap();
    assert!(report.contains("| None |"));
    for slug in ["zero-shot-code", "zero-shot-requirements", "few-shot-code", "few-shot-requirements"] {
        assert!(report.contains(&format!("| mock / {slug} |")), "{slug}");
        assert!(report.contains(&format!("| mock / {slug} | lsi |")), "{slug}");
    }
    assert!(!report.contains("NaN"));
    let csv = std::fs::read_to_string(out.join("pvalues.csv")).unwrap();
    assert!(csv.starts_with("method,metric,left,right,n,w_plus,w_minus,t,p_value,test\n"));
    // 7 methods x 10 condition pairs x 5 metrics
    assert_eq!(csv.lines().count(), 1 + 7 * 10 * 5);
}

#[test]
fn mock_runs_reproduce_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let ds = ebt();
    let run = |name: &str| {
        let out = dir.path().join(name);
        ok(&[
            "run",
            "--no-baselines",
            "--dataset",
            ds.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--seeds",
            "2015",
            "--template",
            "few-shot-requirements",
        ]);
        out
    };
    let (a, b) = (run("a"), run("b"));
    let cond = "conditions/mock.few-shot-requirements";
    for file in [
        "dataset.json".to_string(),
        format!("{cond}/dataset.json"),
        format!("{cond}/seed-2015/pairs.jsonl"),
        format!("{cond}/seed-2015/splits.json"),
        format!("{cond}/seed-2015/model.json"),
        format!("{cond}/seed-2015/epochs.jsonl"),
        format!("{cond}/seed-2015/eval.json"),
        "compare.json".to_string(),
    ] {
        assert_eq!(std::fs::read(a.join(&file)).unwrap(), std::fs::read(b.join(&file)).unwrap(), "{file}");
    }
}

#[test]
fn config_file_paths_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let rel = pathdiff(&ebt(), dir.path());
    std::fs::write(
        &cfg,
        serde_json::json!({
            "dataset": rel,
            "out": "results",
            "templates": ["zero-shot-requirements"],
            "seeds": [2014, 2015],
            "train": {"epochs": 3}
        })
        .to_string(),
    )
    .unwrap();
    let cfg_s = cfg.to_str().unwrap();
    ok(&["ingest", "--config", cfg_s, "--epochs", "2"]);
    let manifest = json(&dir.path().join("results/manifest.json"));
    assert_eq!(manifest["config"]["train"]["epochs"], 2);
    assert_eq!(manifest["config"]["templates"], serde_json::json!(["zero-shot-requirements"]));

    // a different effective config against the same directory is refused
    let err = error_json(&trace(&["augment", "--config", cfg_s]));
    assert_eq!(err["kind"], "config_mismatch");
    ok(&["augment", "--config", cfg_s, "--epochs", "2"]);
    assert!(dir.path().join("results/conditions/mock.zero-shot-requirements/dataset.json").exists());
    assert!(!dir.path().join("results/conditions/mock.zero-shot-code").exists());
}

#[test]
fn compare_pairs_five_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let ds = ebt();
    ok(&[
        "run",
        "--no-baselines",
        "--dataset",
        ds.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--template",
        "zero-shot-code",
        "--epochs",
        "3",
    ]);
    let rows = json(&out.join("compare.json"));
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for r in rows {
        assert_eq!(r["left"], "none");
        assert_eq!(r["right"], "mock.zero-shot-code");
        assert!(r["n_effective"].as_u64().unwrap() <= 5);
        assert_eq!(r["test"], "Exact");
        let p = r["p_value"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&p));
    }
    let summary = json(&out.join("summary.json"));
    assert_eq!(summary[0]["summary"]["seeds"], serde_json::json!([2014, 2015, 2016, 2017, 2018]));
}

#[test]
fn shuffled_control_is_recorded_in_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let ds = ebt();
    ok(&[
        "run",
        "--no-baselines",
        "--shuffle-labels",
        "--dataset",
        ds.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--seeds",
        "2014",
        "--template",
        "zero-shot-code",
    ]);
    assert!(std::fs::read_to_string(out.join("report.md")).unwrap().contains("negative-control run"));
    assert_eq!(json(&out.join("manifest.json"))["config"]["shuffle_labels"], true);
}

/// `target` relative to `base`, both absolute.
fn pathdiff(target: &Path, base: &Path) -> String {
    let target = target.canonicalize().unwrap();
    let base = base.canonicalize().unwrap();
    let common = target.components().zip(base.components()).take_while(|(a, b)| a == b).count();
    let ups = base.components().count() - common;
    let mut rel = PathBuf::new();
    for _ in 0..ups {
        rel.push("..");
    }
    for c in target.components().skip(common) {
        rel.push(c);
    }
    rel.to_string_lossy().into_owned()
}
