//! End-to-end runs of the `qmcsim` binary.

use std::process::{Command, Output};

fn qmcsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmcsim")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn qrng_reports_uniformity() {
    let o = qmcsim(&["qrng", "--n-qubits", "4", "--samples", "100000", "--seed", "9"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let p: f64 = text.rsplit("p = ").next().unwrap().trim().parse().unwrap();
    assert!(p > 0.01, "{text}");
}

#[test]
fn qrng_sample_table_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for path in [&a, &b] {
        let o = qmcsim(&["qrng", "--n-qubits", "2", "--trials", "4", "--seed", "5", "--out", path.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn grover_finds_the_marked_entry() {
    let o = qmcsim(&["grover", "--n-qubits", "6", "--marked", "41", "--trials", "200"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("N = 64, marked = 41, iterations = 6"), "{text}");
}

#[test]
fn mean_from_values_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.csv");
    std::fs::write(&path, "a,b,m2\n-1,1,6\n1\n-1\n1\n-1\n").unwrap();
    let o = qmcsim(&["mean", "--values-file", path.to_str().unwrap(), "--phase-bits", "5", "--reps", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("estimate 0.000000, exact mean 0.000000"), "{text}");
    // two loading calls per iterate plus the initial preparation
    assert!(text.contains("(63 per run)"), "{text}");
}

#[test]
fn integrate_reports_error() {
    let o = qmcsim(&["integrate", "--function", "abs-center", "--n", "8", "--seed", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("exact 0.25000000"));
}

#[test]
fn compare_writes_the_documented_schema() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = qmcsim(&[
            "compare",
            "--methods",
            "deterministic,quantum",
            "--n-grid",
            "4,8,16",
            "--trials",
            "3",
            "--reps",
            "3",
            "--seed",
            "4",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (std::fs::read_to_string(path).unwrap(), stdout(&o))
    };
    let (csv, summary) = run("a.csv");
    assert_eq!(csv.lines().next().unwrap(), "method,n,trials,median_error,queries,gates,qubits,total_cost,seed");
    assert_eq!(csv.lines().count(), 7);
    assert!(summary.contains("deterministic -1.0000"), "{summary}");
    assert_eq!(csv, run("b.csv").0);
}

#[test]
fn compile_identity_and_hadamard() {
    let o = qmcsim(&["compile", "1", "0", "0", "0", "0", "0", "1", "0"]);
    assert!(stdout(&o).starts_with("exact:  I  (length 0"));
    let h = std::f64::consts::FRAC_1_SQRT_2.to_string();
    let mh = (-std::f64::consts::FRAC_1_SQRT_2).to_string();
    let o = qmcsim(&["compile", &h, "0", &h, "0", &h, "0", &mh, "0"]);
    assert!(stdout(&o).starts_with("exact:  W  (length 1"), "{}", stdout(&o));
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        vec!["integrate", "--function", "no-such-function"],
        vec!["compare", "--methods", "guessing"],
        vec!["compile", "1", "0", "1", "0", "0", "0", "1", "0"],
        vec!["mean", "--phase-bits", "0"],
        vec!["integrate", "--n", "100000"],
        vec!["qrng", "--bogus-flag"],
    ] {
        let o = qmcsim(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = qmcsim(&["integrate", "--function", "no-such-function"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("abs-center"));
}
