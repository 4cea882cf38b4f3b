use std::path::Path;
use std::process::{Command, Output};

use lookout::experiments::rng_from_seed;
use rand_distr::{Distribution, StandardNormal};

fn lookout_cmd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lookout")).args(args).output().unwrap()
}

fn write_gaussian_csv(path: &Path, n: usize, m: usize) {
    let mut rng = rng_from_seed(1);
    let mut text = (0..m).map(|j| format!("x{j}")).collect::<Vec<_>>().join(",") + "\n";
    for _ in 0..n {
        let row: Vec<String> = (0..m).map(|_| { let v: f64 = StandardNormal.sample(&mut rng); v.to_string() }).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn detect_writes_one_row_per_input_row() {
    let dir = tempfile::tempdir().unwrap();
    let (input, output) = (dir.path().join("in.csv"), dir.path().join("out.csv"));
    write_gaussian_csv(&input, 1000, 3);
    let out = lookout_cmd(&["detect", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&output).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,surprisal_loo,probability,flag");
    assert_eq!(lines.len(), 1001);
    assert!(lines[1].starts_with("0,"));
}

#[test]
fn detect_rejects_alpha_above_tail_mass() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    write_gaussian_csv(&input, 100, 2);
    let out = lookout_cmd(&["detect", "--input", input.to_str().unwrap(), "--alpha", "0.5", "--beta", "0.9"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));
}

#[test]
fn malformed_and_non_finite_cells_report_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    for (body, line) in [("a,b\n1,2\n3,oops\n", "line 3"), ("a,b\n1,2\n3,4\n5,NaN\n", "line 4"), ("a,b\n1,2\n3\n", "line 3")] {
        std::fs::write(&input, body).unwrap();
        let out = lookout_cmd(&["detect", "--input", input.to_str().unwrap()]);
        assert!(!out.status.success());
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(line), "{err}");
    }
}

#[test]
fn experiment_writes_results_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = lookout_cmd(&[
        "experiment", "--id", "1", "--iterations", "1,2", "--reps", "2", "--seed", "7", "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let results = std::fs::read_to_string(dir.path().join("experiment_1_results.csv")).unwrap();
    assert_eq!(results.lines().count(), 1 + 2 * 2 * 2);
    let summary = std::fs::read_to_string(dir.path().join("experiment_1_summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 2 * 2);
}

#[test]
fn invalid_thread_setting_fails() {
    let out = Command::new(env!("CARGO_BIN_EXE_lookout"))
        .env("LOOKOUT_THREADS", "zero")
        .args(["counterexample", "--n", "100", "--reps", "1"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}
