use std::path::Path;
use std::process::{Command, Output};

use optbench::harness::{read_csv, read_json};
use optbench::RunStatus;

fn optbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optbench"))
        .args(args)
        .env("OPTBENCH_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "json"] {
        let a = dir.path().join(format!("a.{format}"));
        let b = dir.path().join(format!("b.{format}"));
        for out in [&a, &b] {
            let o = optbench(&[
                "run", "--problem", "ridge", "--optimizer", "dowg", "--steps", "300", "--seed", "4", "--domain",
                "ball:3", "--format", format, "--out", path_str(out),
            ]);
            assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
}

#[test]
fn divergent_gd_reports_numeric_overflow() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("div.json");
    let o = optbench(&[
        "run", "--problem", "quadratic1d", "--optimizer", "gd", "--eta", "0.021", "--steps", "400", "--format", "json",
        "--out", path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report = read_json(&out).unwrap();
    assert!(report.status == RunStatus::NumericOverflow || report.final_x[0].abs() > 1e6);
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: &[&[&str]] = &[
        &["run", "--problem", "quadratic1d", "--optimizer", "dowg", "--steps", "10", "--eta", "0.1", "--r-eps", "1e-6"],
        &["run", "--problem", "quadratic1d", "--optimizer", "dowg", "--steps", "10", "--eta", "0.1"],
        &["run", "--problem", "quadratic1d", "--optimizer", "gd", "--steps", "10"],
        &["run", "--problem", "quadratic1d", "--optimizer", "gd", "--steps", "10", "--eta", "0.01", "--r-eps", "1e-3"],
        &["run", "--problem", "nope", "--optimizer", "gd", "--steps", "10", "--eta", "0.01"],
        &["run", "--problem", "quadratic1d", "--optimizer", "adam", "--steps", "10"],
        &["run", "--problem", "quadratic1d", "--optimizer", "gd", "--steps", "0", "--eta", "0.01"],
        &["run", "--problem", "quadratic1d", "--optimizer", "gd", "--steps", "10", "--eta", "0.01", "--domain", "disk:1"],
        &["run", "--bogus-flag"],
        &["frobnicate"],
        &["verify"],
    ];
    for args in cases {
        let o = optbench(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn csv_output_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let json = dir.path().join("t.json");
    let common = ["run", "--problem", "logistic", "--optimizer", "ngd", "--eta", "0.05", "--steps", "200"];
    let mut a = common.to_vec();
    a.extend(["--out", path_str(&csv)]);
    let mut b = common.to_vec();
    b.extend(["--format", "json", "--out", path_str(&json)]);
    assert_eq!(optbench(&a).status.code(), Some(0));
    assert_eq!(optbench(&b).status.code(), Some(0));
    let from_csv = read_csv(&csv).unwrap();
    let from_json = read_json(&json).unwrap().records;
    assert_eq!(from_csv.len(), 200);
    for (x, y) in from_csv.iter().zip(&from_json) {
        assert_eq!(x.f_gap.unwrap().to_bits(), y.f_gap.unwrap().to_bits());
        assert_eq!(x, y);
    }
    let header = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(
        header.lines().next().unwrap(),
        "step,f_value,f_gap,grad_norm,stepsize,effective_stepsize,rbar,v,distance_to_opt,avg_f_gap"
    );
}

#[test]
fn verify_saved_report() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = optbench(&[
        "run", "--problem", "quadratic1d", "--optimizer", "gd", "--eta", "0.01", "--steps", "50", "--format", "json",
        "--out", path_str(&json),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = optbench(&["verify", "--theorem", "gd-smooth", "--in", path_str(&json)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("PASS gd-smooth"));
    let o = optbench(&["verify", "--theorem", "dowg-smooth", "--in", path_str(&json)]);
    assert_eq!(o.status.code(), Some(1));
    let o = optbench(&["verify", "--theorem", "no-such-bound", "--in", path_str(&json)]);
    assert_eq!(o.status.code(), Some(2));

    let csv = dir.path().join("r.csv");
    std::fs::write(&csv, "x").unwrap();
    let o = optbench(&["verify", "--theorem", "gd-smooth", "--in", path_str(&csv)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_edge_of_stability_and_domination_on_saved_dowg_report() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("d.json");
    let o = optbench(&[
        "run", "--problem", "ridge", "--optimizer", "dowg", "--steps", "10000", "--format", "json", "--out",
        path_str(&json),
    ]);
    assert_eq!(o.status.code(), Some(0));
    for theorem in ["edge-of-stability", "stepsize-domination"] {
        let o = optbench(&["verify", "--theorem", theorem, "--in", path_str(&json)]);
        assert_eq!(o.status.code(), Some(0), "{theorem}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn plot_writes_valid_svg_with_every_point() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("n.csv");
    let svg = dir.path().join("n.svg");
    let o = optbench(&[
        "run", "--problem", "ridge", "--optimizer", "ngd", "--eta", "0.1", "--steps", "500", "--out", path_str(&csv),
    ]);
    assert_eq!(o.status.code(), Some(0));
    for (series, log) in [("effective_stepsize", false), ("f_gap", true)] {
        let mut args = vec!["plot", "--in", path_str(&csv), "--out", path_str(&svg), "--series", series];
        if log {
            args.push("--log-y");
        }
        assert_eq!(optbench(&args).status.code(), Some(0));
        let text = std::fs::read_to_string(&svg).unwrap();
        let doc = roxmltree::Document::parse(&text).expect("valid XML");
        assert_eq!(doc.root_element().tag_name().name(), "svg");
        let line = doc
            .descendants()
            .find(|n| n.has_tag_name("polyline"))
            .expect("polyline present");
        let vertices = line.attribute("points").unwrap().split_whitespace().count();
        assert_eq!(vertices, 500, "{series}");
    }
}

#[test]
fn sweep_prints_one_row_per_value_and_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let o = optbench(&[
        "sweep", "--problem", "abs_sum", "--optimizer", "dowg", "--param", "steps", "--values", "100,1000",
        "--out-dir", path_str(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains("dowg-lipschitz")).count(), 2);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn selftest_passes() {
    let o = optbench(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn help_exits_zero() {
    assert_eq!(optbench(&["--help"]).status.code(), Some(0));
    assert_eq!(optbench(&["run", "--help"]).status.code(), Some(0));
}
