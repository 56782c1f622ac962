//! End-to-end runs of the `wf-excursions` binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wf-excursions")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows (header excluded) of a CSV report, split into fields.
fn rows(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout(out);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().expect("header").split(',').map(str::to_owned).collect();
    let body = lines.map(|l| l.split(',').map(str::to_owned).collect()).collect();
    (header, body)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s}"))
}

#[test]
fn eigen_rows_are_normalised_monotone_and_reproducible() {
    let args = ["--theta1", "0.3", "--theta2", "0.7", "eigen", "--lambda", "0.1"];
    let out = run(&args);
    assert!(out.status.success());
    let (h, body) = rows(&out);
    assert_eq!(body.len(), 101);
    let (x, minus, plus) = (column(&h, "x"), column(&h, "phi_minus"), column(&h, "phi_plus"));
    assert_eq!(num(&body[0][x]), 0.0);
    assert!((num(&body[0][minus]) - 1.0).abs() < 1e-12);
    assert!((num(&body[100][plus]) - 1.0).abs() < 1e-12);
    for w in body.windows(2) {
        assert!(num(&w[1][minus]) > num(&w[0][minus]));
        assert!(num(&w[1][plus]) < num(&w[0][plus]));
    }
    assert_eq!(out.stdout, run(&args).stdout, "re-run must be byte-identical");
}

#[test]
fn eigen_defaults_cover_three_parameter_sets() {
    let out = run(&["eigen", "--x-grid", "0,1"]);
    assert!(out.status.success());
    assert_eq!(rows(&out).1.len(), 6);
}

#[test]
fn entrance_density_is_nonnegative_and_loses_mass() {
    let out = run(&["--theta1", "0.3", "--theta2", "0.7", "entrance"]);
    assert!(out.status.success());
    let (h, body) = rows(&out);
    let (t, x, d, flag) = (column(&h, "t"), column(&h, "x"), column(&h, "density"), column(&h, "consistency_flag"));
    let times = [0.1, 0.5, 1.0, 5.0];
    assert_eq!(body.len(), 99 * times.len());
    let mut masses = Vec::new();
    for &time in &times {
        let block: Vec<_> = body.iter().filter(|r| num(&r[t]) == time).collect();
        assert_eq!(block.len(), 99);
        for r in &block {
            assert!(r[flag] == "ok" || r[flag] == "unstable");
            if r[flag] == "ok" {
                assert!(num(&r[d]) >= 0.0, "{r:?}");
            }
        }
        let mass: f64 = block.windows(2).map(|w| 0.5 * (num(&w[0][d]) + num(&w[1][d])) * (num(&w[1][x]) - num(&w[0][x]))).sum();
        masses.push(mass);
    }
    for w in masses.windows(2) {
        assert!(w[1] < w[0], "{masses:?}");
    }
}

#[test]
fn verify_passes_and_detects_a_perturbed_gamma() {
    let base = ["--theta1", "0.3", "--theta2", "0.7", "verify"];
    let out = run(&base);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (h, body) = rows(&out);
    assert_eq!(body.len(), 46);
    let pass = column(&h, "pass");
    assert!(body.iter().all(|r| r[pass] == "true"));

    let bad = run(&["--perturb-gamma", "1e-3", "--theta1", "0.3", "--theta2", "0.7", "verify"]);
    assert_eq!(bad.status.code(), Some(4));
    let (h, body) = rows(&bad);
    let (check, pass) = (column(&h, "check"), column(&h, "pass"));
    assert!(body.iter().any(|r| r[check] == "green_tri_form" && r[pass] == "false"));
}

#[test]
fn hausdorff_slope_matches_boundary_index() {
    let out = run(&["--theta1", "0.3", "--theta2", "0.7", "hausdorff"]);
    assert!(out.status.success());
    let (h, body) = rows(&out);
    let (b, slope) = (column(&h, "boundary"), column(&h, "slope"));
    let at0 = body.iter().find(|r| r[b] == "0").unwrap();
    assert!((num(&at0[slope]) - 0.7).abs() < 0.02);
}

#[test]
fn green_forms_agree() {
    let out = run(&["green"]);
    assert!(out.status.success());
    let (h, body) = rows(&out);
    let cols = [column(&h, "jacobi"), column(&h, "product"), column(&h, "wronskian")];
    assert_eq!(body.len(), 3 * 9);
    for r in &body {
        let v: Vec<f64> = cols.iter().map(|&c| num(&r[c])).collect();
        for w in v.windows(2) {
            assert!((w[0] - w[1]).abs() <= 1e-6 * w[1].abs(), "{r:?}");
        }
    }
}

#[test]
fn resolvent_of_constant_is_inverse_rate() {
    let out = run(&["--theta1", "0.5", "--theta2", "0.5", "resolvent", "--lambda-grid", "2", "--function", "one"]);
    assert!(out.status.success());
    let (h, body) = rows(&out);
    let v = column(&h, "value");
    for r in &body {
        assert!((num(&r[v]) - 0.5).abs() < 1e-9, "{r:?}");
    }
}

#[test]
fn simulation_is_reproducible_for_a_seed() {
    let args = ["--theta1", "0.5", "--theta2", "0.5", "--seed", "11", "simulate", "--mode", "path", "--n-paths", "4"];
    let a = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, run(&args).stdout);
    let other = run(&["--theta1", "0.5", "--theta2", "0.5", "--seed", "12", "simulate", "--mode", "path", "--n-paths", "4"]);
    assert_ne!(rows(&a).1, rows(&other).1);
}

#[test]
fn thread_count_does_not_change_results() {
    let args = ["--seed", "5", "simulate", "--mode", "exit", "--n-paths", "400"];
    let one = Command::new(env!("CARGO_BIN_EXE_wf-excursions")).args(args).env("WF_EXCURSIONS_THREADS", "1").output().unwrap();
    let three = Command::new(env!("CARGO_BIN_EXE_wf-excursions")).args(args).env("WF_EXCURSIONS_THREADS", "3").output().unwrap();
    assert!(one.status.success() && three.status.success());
    assert_eq!(rows(&one).1, rows(&three).1);
}

#[test]
fn json_output_carries_provenance() {
    let out = run(&["--format", "json", "eigen", "--x-grid", "0.5"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["provenance"]["command"], "eigen");
    assert_eq!(doc["records"].as_array().unwrap().len(), 3);
}

#[test]
fn exit_codes_classify_failures() {
    assert_eq!(run(&["--theta1", "1.5", "--theta2", "0.5", "eigen"]).status.code(), Some(2));
    assert_eq!(run(&["--theta1", "0.5", "eigen"]).status.code(), Some(2));
    assert_eq!(run(&["entrance", "--t-grid", "0.01"]).status.code(), Some(2));
    assert_eq!(run(&["--threads", "0", "eigen"]).status.code(), Some(2));
    let budget = run(&["simulate", "--mode", "hitting", "--n-paths", "1", "--max-steps", "10"]);
    assert_eq!(budget.status.code(), Some(3));
    assert!(!budget.stderr.is_empty());
}

#[test]
fn output_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("wf-excursions-cli-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let to_file = run(&["--out", p, "green", "--lambda-grid", "1", "--x-grid", "0.5"]);
    assert!(to_file.status.success());
    let written = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written, run(&["green", "--lambda-grid", "1", "--x-grid", "0.5"]).stdout);
}
