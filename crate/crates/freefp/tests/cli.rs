//! End-to-end tests of the `freefp` binary: flag handling, output formats,
//! exit codes, determinism.

use std::path::Path;
use std::process::{Command, Output};

fn freefp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freefp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn freefp_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freefp"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("output file exists"))
        .expect("output parses as JSON")
}

#[test]
fn equilibrium_one_cut_profile() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("eq.json");
    let res = freefp(&["equilibrium", "--c", "0", "--grid", "256", "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));

    let v = read_json(&out);
    assert_eq!(v["kind"], "one_cut");
    let support = v["support"].as_array().unwrap();
    assert_eq!(support.len(), 1);
    let lo = support[0][0].as_f64().unwrap();
    let hi = support[0][1].as_f64().unwrap();
    assert!((hi - 1.519_671_371_303_185_3).abs() < 1e-9);
    assert!((lo + hi).abs() < 1e-15, "support is symmetric");

    let nodes = v["nodes"].as_array().unwrap();
    let density = v["density"].as_array().unwrap();
    assert_eq!(nodes.len(), 256);
    assert_eq!(density.len(), 256);
    assert!(density.iter().all(|d| d.as_f64().unwrap() >= 0.0));
}

#[test]
fn equilibrium_two_cut_profile() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("eq.json");
    let res = freefp(&["equilibrium", "--c", "-3", "--grid", "256", "--out", out.to_str().unwrap()]);
    assert!(res.status.success());

    let v = read_json(&out);
    assert_eq!(v["kind"], "two_cut");
    let support = v["support"].as_array().unwrap();
    assert_eq!(support.len(), 2);
    let sqrt5 = 5.0_f64.sqrt();
    let expect = [[-sqrt5, -1.0], [1.0, sqrt5]];
    for (interval, want) in support.iter().zip(expect) {
        assert!((interval[0].as_f64().unwrap() - want[0]).abs() < 1e-9);
        assert!((interval[1].as_f64().unwrap() - want[1]).abs() < 1e-9);
    }
    assert_eq!(v["nodes"].as_array().unwrap().len(), 512);
}

#[test]
fn bad_flag_values_exit_2() {
    assert_eq!(freefp(&["equilibrium", "--c", "abc"]).status.code(), Some(2));
    assert_eq!(freefp(&["equilibrium", "--c", "0", "--grid", "8"]).status.code(), Some(2));
    assert_eq!(freefp(&["converge", "--c", "0", "--n", "4", "--dt", "0.2"]).status.code(), Some(2));
    assert_eq!(freefp(&["converge", "--c", "0", "--n", "4", "--init", "blob:1"]).status.code(), Some(2));
    assert_eq!(freefp(&["not-a-subcommand"]).status.code(), Some(2));
    assert_eq!(
        freefp(&["equilibrium", "--c", "0", "--out", "/no-such-dir/x.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(freefp(&["--help"]).status.code(), Some(0));
    assert_eq!(freefp(&["--version"]).status.code(), Some(0));
}

#[test]
fn stationary_census_counts() {
    // Unique symmetric candidate on the one-cut side; none just past the
    // transition; the mirror pair at (a 7-digit truncation of) the critical
    // coupling.
    for (c, expected) in [("1", 1usize), ("0", 1), ("-2", 1), ("-2.5", 0), ("-3.872983", 2)] {
        let res = freefp(&["stationary", "--c", c]);
        assert!(res.status.success());
        let v: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
        let list = v.as_array().unwrap();
        assert_eq!(list.len(), expected, "c = {c}");
    }

    // The pair is mirror-symmetric and flagged by its branch cases.
    let res = freefp(&["stationary", "--c", "-3.872983"]);
    let v: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    let list = v.as_array().unwrap();
    let right = &list[0];
    let left = &list[1];
    assert_eq!(right["case_tag"], "plus_branch");
    assert_eq!(left["case_tag"], "minus_branch");
    assert!((right["a"].as_f64().unwrap() + left["b"].as_f64().unwrap()).abs() < 1e-6);
    assert!((right["b"].as_f64().unwrap() + left["a"].as_f64().unwrap()).abs() < 1e-6);
}

#[test]
fn critical_reports_identity_residuals() {
    let res = freefp(&["critical", "--c", "-2"]);
    assert!(res.status.success());
    let v: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert!(v["r_identity_residual"].as_f64().unwrap() < 1e-6);
    assert!(v["el_residual"].as_f64().unwrap() < 1e-3);
    let coeffs: Vec<f64> = v["r_coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(coeffs.len(), 7);
    assert!((coeffs[6] - 0.25).abs() < 1e-15);
}

#[test]
fn simulate_writes_final_positions() {
    let res = freefp(&[
        "simulate", "--c", "0", "--n", "32", "--dt", "0.01", "--t-final", "0.5",
        "--seed", "3", "--init", "uniform:-1,1", "--noise", "vanishing",
    ]);
    assert!(res.status.success());
    let text = String::from_utf8(res.stdout).unwrap();
    let xs: Vec<f64> = text.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(xs.len(), 32);
    assert!(xs.windows(2).all(|w| w[0] < w[1]), "positions stay ordered");
}

#[test]
fn converge_csv_is_deterministic_across_reruns() {
    let args = [
        "converge", "--c", "-1", "--n", "64", "--dt", "0.01", "--t-final", "0.5",
        "--seed", "11", "--init", "uniform:-0.5,0.5", "--noise", "vanishing",
        "--every", "5", "--p", "3",
    ];
    let first = freefp(&args);
    let second = freefp(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "byte-identical reruns");

    let text = String::from_utf8(first.stdout).unwrap();
    assert!(text.starts_with("t,w1,w2,wp,sigma_v,dissipation,m1,m2,min_gap\n"));
    // --p fills the wp column.
    let second_line = text.lines().nth(1).unwrap();
    let fields: Vec<&str> = second_line.split(',').collect();
    assert!(!fields[3].is_empty());
}

#[test]
fn worker_count_does_not_change_output() {
    // Cross the parallel threshold (n ≥ 512) so the thread pool actually
    // engages, then pin different worker counts.
    let args = [
        "converge", "--c", "0", "--n", "640", "--dt", "0.01", "--t-final", "0.05",
        "--seed", "2", "--init", "equilibrium", "--noise", "none",
    ];
    let one = freefp_with_env(&args, "FREEFP_THREADS", "1");
    let eight = freefp_with_env(&args, "FREEFP_THREADS", "8");
    assert!(one.status.success());
    assert_eq!(one.stdout, eight.stdout, "FREEFP_THREADS must not change results");
}

#[test]
fn stiff_run_exits_3_with_partial_series() {
    let dir = tempfile::tempdir().unwrap();
    let init = dir.path().join("init.txt");
    std::fs::write(&init, "-1e40\n1e40\n").unwrap();
    let out = dir.path().join("series.csv");
    let res = freefp(&[
        "converge", "--c", "0", "--n", "2", "--noise", "none",
        "--init", &format!("file:{}", init.display()),
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(3));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("t,"), "header present");
    assert!(text.lines().last().unwrap().starts_with("# aborted:"), "trailer comment present");
}

#[test]
fn selftest_quick_is_green() {
    let res = freefp(&["selftest", "--quick"]);
    assert_eq!(res.status.code(), Some(0), "stdout: {}", String::from_utf8_lossy(&res.stdout));
    let text = String::from_utf8(res.stdout).unwrap();
    assert!(text.contains("normalization"), "table lists the checks");
    assert!(!text.contains("FAIL"));
}
