//! Experiment drivers: reproducibility and output format.

use qmcsim::classical::Method;
use qmcsim::experiment::{
    records_to_csv, run_convergence, run_grover, run_qrng, ConvergenceStudy, StudyFamily, CSV_HEADER,
};
use qmcsim::integration::Family;

#[test]
fn single_qubit_qrng_is_a_fair_coin() {
    let r = run_qrng(1, 100_000, 5).unwrap();
    assert!((r.frequencies()[1] - 0.5).abs() <= 0.005);
}

#[test]
fn qrng_uniform_over_sixteen_outcomes() {
    let r = run_qrng(4, 100_000, 6).unwrap();
    assert_eq!(r.counts.len(), 16);
    assert!(r.p_value > 0.01);
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let run = || {
        let study = ConvergenceStudy::new(
            vec![Method::Quantum, Method::CvMonteCarlo],
            StudyFamily::Integrand(Family::LipschitzTents),
            vec![8],
            1,
            12,
        );
        records_to_csv(&run_convergence(&study).unwrap().records).unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    assert_eq!(a.lines().next().unwrap(), CSV_HEADER);
    assert_eq!(CSV_HEADER, "method,n,trials,median_error,queries,gates,qubits,total_cost,seed");
}

#[test]
fn rows_can_be_regenerated_alone() {
    let grid = vec![4, 8, 16];
    let full = run_convergence(&ConvergenceStudy::new(
        vec![Method::MonteCarlo],
        StudyFamily::Integrand(Family::LipschitzTents),
        grid,
        5,
        13,
    ))
    .unwrap();
    let single = run_convergence(&ConvergenceStudy::new(
        vec![Method::MonteCarlo],
        StudyFamily::Integrand(Family::LipschitzTents),
        vec![8],
        5,
        13,
    ))
    .unwrap();
    assert_eq!(full.record(Method::MonteCarlo, 8), single.record(Method::MonteCarlo, 8));
}

#[test]
fn boolean_study_reports_rates() {
    let mut study = ConvergenceStudy::new(
        vec![Method::Quantum, Method::MonteCarlo],
        StudyFamily::Boolean { len: 64, sequences: 4 },
        vec![16, 32, 64, 128],
        5,
        14,
    );
    study.repetitions = 1;
    let report = run_convergence(&study).unwrap();
    assert_eq!(report.records.len(), 8);
    assert!(report.fit(Method::Quantum).unwrap().slope < -0.6);
    assert!(report.records.iter().all(|r| r.trials == 20));
}

#[test]
fn grover_driver_matches_prediction() {
    let r = run_grover(6, 17, 500, 15).unwrap();
    assert_eq!(r.len, 64);
    assert!((r.successes as f64 / r.trials as f64 - r.predicted).abs() < 0.03);
}
