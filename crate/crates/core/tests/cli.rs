use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use noxcast::synth::{write_public_csv, SyntheticPlant};

fn noxcast(args: &[&str], data: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noxcast"))
        .args(args)
        .arg("--data")
        .arg(data)
        .arg("--out")
        .arg(out)
        .env_remove("NOXCAST_OUT")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], data: &Path, out: &Path) {
    let o = noxcast(args, data, out);
    assert!(
        o.status.success(),
        "noxcast {args:?} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
}

fn synthetic_data(dir: &Path) -> PathBuf {
    let data = dir.join("data");
    write_public_csv(&SyntheticPlant::small(50, 31).generate(), &data).unwrap();
    data
}

fn full_pipeline(data: &Path, out: &Path) {
    ok(&["ingest"], data, out);
    ok(&["stats", "--bins", "10"], data, out);
    for s in ["temporal", "stratified"] {
        ok(&["split", "--strategy", s], data, out);
        ok(&["train", "--strategy", s, "--max-epochs", "40", "--patience", "20"], data, out);
        ok(&["evaluate", "--strategy", s], data, out);
        ok(&["importance", "--strategy", s, "--repeats", "3"], data, out);
        ok(&["profile", "--strategy", s, "--variable", "TIT,AT", "--grid", "7"], data, out);
        ok(&["optimize", "--strategy", s, "--starts", "4"], data, out);
    }
    ok(&["report"], data, out);
}

fn read_tree(root: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                files.push((p.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&p).unwrap()));
            }
        }
    }
    files.sort();
    files
}

#[test]
fn pipeline_is_deterministic_and_report_regenerates_identically() {
    let dir = tempfile::tempdir().unwrap();
    let data = synthetic_data(dir.path());
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    full_pipeline(&data, &out_a);
    full_pipeline(&data, &out_b);

    let a = read_tree(&out_a);
    let b = read_tree(&out_b);
    assert_eq!(a.iter().map(|f| &f.0).collect::<Vec<_>>(), b.iter().map(|f| &f.0).collect::<Vec<_>>());
    for ((name, x), (_, y)) in a.iter().zip(&b) {
        assert!(x == y, "{} differs between runs", name.display());
    }
    for f in ["temporal/model.json", "stratified/optimum.json", "temporal/profile_TIT.csv", "report.md"] {
        assert!(out_a.join(f).exists(), "{f}");
    }

    let before = std::fs::read(out_a.join("report.md")).unwrap();
    ok(&["report", "--overwrite"], &data, &out_a);
    assert_eq!(std::fs::read(out_a.join("report.md")).unwrap(), before);

    let report = String::from_utf8(before).unwrap();
    assert!(report.contains("Trained on Y2011-2013, validated on Y2014, tested on Y2015"));
    assert!(report.contains("(`stratified/optimum.json`)"));
    assert!(!report.contains("not run: `stratified"), "{report}");
}

#[test]
fn artifacts_are_write_once() {
    let dir = tempfile::tempdir().unwrap();
    let data = synthetic_data(dir.path());
    let out = dir.path().join("out");
    ok(&["ingest"], &data, &out);
    let again = noxcast(&["ingest"], &data, &out);
    assert_eq!(again.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&again.stderr).contains("dataset_summary.json"));
    ok(&["ingest", "--overwrite"], &data, &out);
}

#[test]
fn stats_only_report_marks_missing_steps() {
    let dir = tempfile::tempdir().unwrap();
    let data = synthetic_data(dir.path());
    let out = dir.path().join("out");
    ok(&["stats"], &data, &out);
    ok(&["report"], &data, &out);
    let report = std::fs::read_to_string(out.join("report.md")).unwrap();
    assert!(report.contains("Pearson correlations (`correlation.csv`)"));
    assert!(report.contains("not run: `dataset_summary.json` is missing; run `noxcast ingest`"));
    assert!(report.contains("run `noxcast train --strategy temporal`"));
    assert!(report.contains("run `noxcast optimize --strategy stratified`"));
}

#[test]
fn missing_data_path_is_named_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no-such-dir");
    let o = noxcast(&["ingest"], &missing, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-such-dir"));
}

#[test]
fn evaluate_without_model_points_at_train() {
    let dir = tempfile::tempdir().unwrap();
    let data = synthetic_data(dir.path());
    let o = noxcast(&["evaluate", "--strategy", "temporal"], &data, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("noxcast train --strategy temporal"));
}

#[test]
fn usage_errors_exit_with_two() {
    let o = Command::new(env!("CARGO_BIN_EXE_noxcast")).arg("frobnicate").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_noxcast")).arg("--help").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let help = String::from_utf8_lossy(&o.stdout);
    for cmd in ["ingest", "stats", "split", "train", "evaluate", "importance", "profile", "optimize", "report"] {
        assert!(help.contains(cmd), "{cmd}");
    }
}

#[test]
fn out_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let data = synthetic_data(dir.path());
    let out = dir.path().join("from-env");
    let o = Command::new(env!("CARGO_BIN_EXE_noxcast"))
        .args(["ingest", "--data"])
        .arg(&data)
        .env("NOXCAST_OUT", &out)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(out.join("dataset_summary.json").exists());
}

#[test]
fn config_file_and_custom_schema() {
    let dir = tempfile::tempdir().unwrap();
    let ds = SyntheticPlant::small(30, 2).generate();
    let data = dir.path().join("data");
    write_public_csv(&ds, &data).unwrap();
    // rename the headers to canonical names and describe them in a schema
    for e in std::fs::read_dir(&data).unwrap() {
        let p = e.unwrap().path();
        let text = std::fs::read_to_string(&p).unwrap().replacen("GTEP", "TEP", 1).replacen("TAT", "TET", 1);
        std::fs::write(&p, text).unwrap();
    }
    std::fs::write(dir.path().join("schema.json"), noxcast::dataset::Schema::canonical().to_json_string()).unwrap();
    std::fs::write(
        dir.path().join("run.json"),
        r#"{"data": ["data"], "schema": "schema.json", "strategy": "temporal", "seed": 3, "train": {"max_epochs": 20, "patience": 5}}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_noxcast"))
            .args(args)
            .arg("--config")
            .arg(dir.path().join("run.json"))
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap()
    };
    let o = run(&["train"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = std::fs::read_to_string(out.join("temporal/train_summary.json")).unwrap();
    assert!(summary.contains("\"seed\": 3"));
    assert!(summary.contains("\"epochs_run\": 20") || summary.contains("\"stop_reason\": \"Patience\""));
}
