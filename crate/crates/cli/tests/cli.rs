use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use strat_core::io::{read_table_file, write_table_file, CloudTable};
use strat_core::sample_spaces::{hausdorff, PointCloud};
use tempfile::TempDir;

fn strat(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strat"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_writes_requested_rows_deterministically() {
    let dir = TempDir::new().unwrap();
    let args = [
        "--set",
        "dataset=lemniscate",
        "--set",
        "dataset.n=2000",
        "--seed",
        "4",
    ];
    ok(&strat(
        dir.path(),
        &[&args[..], &["--out", "a", "generate"]].concat(),
    ));
    ok(&strat(
        dir.path(),
        &[&args[..], &["--out", "b", "generate"]].concat(),
    ));
    let a = fs::read(dir.path().join("a/points.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b/points.csv")).unwrap());
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 2001);
}

#[test]
fn config_errors_exit_with_2() {
    let dir = TempDir::new().unwrap();
    let out = strat(dir.path(), &["--set", "dataset=torus", "generate"]);
    assert_eq!(out.status.code(), Some(2));
    fs::write(dir.path().join("bad.cfg"), "u = 7\n").unwrap();
    assert_eq!(
        strat(dir.path(), &["--config", "bad.cfg", "generate"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(strat(dir.path(), &["generate"]).status.code(), Some(2));
}

#[test]
fn data_errors_exit_with_3() {
    let dir = TempDir::new().unwrap();
    let out = strat(dir.path(), &["stratify", "--input", "missing.csv"]);
    assert_eq!(out.status.code(), Some(3));
    let plain = dir.path().join("plain.csv");
    write_table_file(
        &plain,
        &CloudTable::plain(PointCloud::new(2, vec![vec![0.0, 0.0]]).unwrap()),
    )
    .unwrap();
    assert_eq!(
        strat(dir.path(), &["persist", "--input", "plain.csv"])
            .status
            .code(),
        Some(3)
    );
    let out = strat(
        dir.path(),
        &["dist", "plain.csv", "plain.csv", "--metric", "stratified"],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn stratify_finds_five_regions_on_the_wide_band() {
    let dir = TempDir::new().unwrap();
    let cfg = "dataset = lemniscate\ndataset.sampler = band\ndataset.d = 0.07\ndataset.n = 1000\nzeta = 3\nu = 0.6\n";
    fs::write(dir.path().join("run.cfg"), cfg).unwrap();
    ok(&strat(dir.path(), &["--config", "run.cfg", "generate"]));
    ok(&strat(dir.path(), &["--config", "run.cfg", "stratify"]));
    let summary = json(&dir.path().join("out/stratify_summary.json"));
    assert_eq!(summary["clusters"], 5);
    let table = read_table_file(dir.path().join("out/stratified.csv")).unwrap();
    assert!(table.stratum.is_some() && table.s.is_some());

    ok(&strat(
        dir.path(),
        &["--config", "run.cfg", "--set", "u=1", "stratify"],
    ));
    let summary = json(&dir.path().join("out/stratify_summary.json"));
    assert_eq!(summary["singular"], 1000);
}

#[test]
fn empty_inputs_give_empty_outputs() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("empty.csv"), "x0,x1\n").unwrap();
    ok(&strat(dir.path(), &["stratify", "--input", "empty.csv"]));
    let out = fs::read_to_string(dir.path().join("out/stratified.csv")).unwrap();
    assert_eq!(out.trim(), "x0,x1,stratum,s");
    ok(&strat(dir.path(), &["persist"]));
    let bc = json(&dir.path().join("out/barcode.json"));
    for flag in ["p", "pq", "q"] {
        assert_eq!(bc[flag], serde_json::json!([]));
    }
}

#[test]
fn lemniscate_pipeline_has_four_link_components() {
    let dir = TempDir::new().unwrap();
    let args = ["--set", "dataset=lemniscate", "--reproducible"];
    ok(&strat(
        dir.path(),
        &[&args[..], &["--out", "a", "pipeline"]].concat(),
    ));
    let bc = json(&dir.path().join("a/barcode.json"));
    let long = |flag: &str| {
        let degree0 = &bc[flag][0];
        assert_eq!(degree0["degree"], 0);
        degree0["bars"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|b| {
                let birth = b[0].as_f64().unwrap();
                let death = b[1].as_f64().unwrap_or(f64::INFINITY);
                birth <= 0.02 && death - birth >= 0.1
            })
            .count()
    };
    assert_eq!((long("p"), long("pq"), long("q")), (1, 4, 2));
    let svg = fs::read_to_string(dir.path().join("a/barcode.svg")).unwrap();
    assert!(!svg.contains("generated"));

    // same seed and config: identical outputs
    ok(&strat(
        dir.path(),
        &[&args[..], &["--out", "b", "pipeline"]].concat(),
    ));
    for f in [
        "points.csv",
        "stratified.csv",
        "stratify_summary.json",
        "diagram.json",
        "barcode.json",
        "barcode.svg",
    ] {
        assert_eq!(
            fs::read(dir.path().join("a").join(f)).unwrap(),
            fs::read(dir.path().join("b").join(f)).unwrap(),
            "{f}"
        );
    }

    ok(&strat(
        dir.path(),
        &["--out", "a", "--reproducible", "plot", "--top-k", "1"],
    ));
    let svg = fs::read_to_string(dir.path().join("a/barcode.svg")).unwrap();
    assert_eq!(
        svg.matches("class=\"bar\"").count(),
        3,
        "one bar per flag panel"
    );
}

#[test]
fn single_bar_plot() {
    let dir = TempDir::new().unwrap();
    let bc = r#"{"p": [{"degree": 0, "bars": [[0.0, "inf"], [0.0, 0.1]]}], "pq": [], "q": [], "max_radius": 0.3}"#;
    fs::write(dir.path().join("bc.json"), bc).unwrap();
    ok(&strat(
        dir.path(),
        &["plot", "--input", "bc.json", "--top-k", "1"],
    ));
    let svg = fs::read_to_string(dir.path().join("out/barcode.svg")).unwrap();
    assert_eq!(svg.matches("class=\"bar\"").count(), 1);
}

#[test]
fn distances() {
    let dir = TempDir::new().unwrap();
    let a = PointCloud::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.25], vec![-0.5, 0.5]]).unwrap();
    let b = PointCloud::new(2, vec![vec![0.1, 0.0], vec![0.75, 0.3]]).unwrap();
    write_table_file(dir.path().join("a.csv"), &CloudTable::plain(a.clone())).unwrap();
    write_table_file(dir.path().join("b.csv"), &CloudTable::plain(b.clone())).unwrap();
    let out = ok(&strat(dir.path(), &["dist", "a.csv", "a.csv"]));
    assert_eq!(out.trim(), "0.000000000");
    let out = ok(&strat(dir.path(), &["dist", "a.csv", "b.csv"]));
    assert_eq!(out.trim(), format!("{:.9}", hausdorff(&a, &b).unwrap()));

    let with = |mask: Vec<bool>| CloudTable {
        cloud: a.clone(),
        stratum: Some(mask),
        s: None,
    };
    write_table_file(dir.path().join("sa.csv"), &with(vec![true, false, false])).unwrap();
    write_table_file(dir.path().join("sb.csv"), &with(vec![false, false, false])).unwrap();
    let out = ok(&strat(
        dir.path(),
        &["dist", "sa.csv", "sb.csv", "--metric", "stratified"],
    ));
    assert_eq!(out.trim(), "inf");
}
