use sobolev_ball::experiment::{
    emit_report, fit_slope, parse_csv, run_convergence, run_convergence_with, Column, ConvergenceRecord,
    ExperimentConfig, CSV_HEADER,
};
use sobolev_ball::{Error, Execution};

fn rec(n: usize, e: f64) -> ConvergenceRecord {
    ConvergenceRecord { n, err_l2: e, err_grad: 2.0 * e, err_sob: 2.0 * e }
}

#[test]
fn empty_report_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    emit_report(&[], &path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), format!("{CSV_HEADER}\n"));
}

#[test]
fn three_records_give_four_lines_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("three.csv");
    let rs = vec![rec(2, 0.5), rec(3, 1.0 / 3.0), rec(4, 1e-300)];
    emit_report(&rs, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert_eq!(parse_csv(&text).unwrap(), rs);
}

#[test]
fn unwritable_path_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    assert!(matches!(emit_report(&[rec(2, 1.0)], &path), Err(Error::Io(_))));
}

#[test]
fn reruns_are_byte_identical_in_both_modes() {
    let cfg = ExperimentConfig::new(3, "1/2", 10, "abs_x1", "sobolev").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for (k, exec) in [Execution::Sequential, Execution::Parallel, Execution::Parallel]
        .into_iter()
        .enumerate()
    {
        let path = dir.path().join(format!("run{k}.csv"));
        emit_report(&run_convergence_with(&cfg, exec).unwrap(), &path).unwrap();
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(files[1], files[2]);
}

#[test]
fn records_cover_every_degree_and_are_nonnegative() {
    let cfg = ExperimentConfig::new(1, "-1/2", 12, "exp_x1(2)", "lebesgue").unwrap();
    let rs = run_convergence(&cfg).unwrap();
    assert_eq!(rs.iter().map(|r| r.n).collect::<Vec<_>>(), (2..=12).collect::<Vec<_>>());
    for r in &rs {
        assert!(r.err_l2 >= 0.0 && r.err_grad >= 0.0 && r.err_sob >= r.err_grad);
    }
}

#[test]
fn slope_fit_recovers_power_laws() {
    let rs: Vec<_> = (2..20).map(|n| rec(n, 7.0 * (n as f64).powi(-3))).collect();
    assert!((fit_slope(&rs, Column::L2).unwrap() + 3.0).abs() < 1e-10);
    assert!((fit_slope(&rs, Column::Grad).unwrap() + 3.0).abs() < 1e-10);
}

#[test]
fn slope_fit_skips_zeros_and_needs_four_points() {
    let mut rs: Vec<_> = (2..6).map(|n| rec(n, (n as f64).powi(-2))).collect();
    rs[1].err_l2 = 0.0;
    assert!(matches!(
        fit_slope(&rs, Column::L2),
        Err(Error::TooFewPoints { need: 4, got: 3 })
    ));
    rs.push(rec(6, 1.0 / 36.0));
    assert!((fit_slope(&rs, Column::L2).unwrap() + 2.0).abs() < 1e-10);
}

#[test]
fn invalid_configurations_are_rejected() {
    assert!(ExperimentConfig::new(2, "-1", 8, "exp_x1", "sobolev").is_err());
    assert!(ExperimentConfig::new(2, "0", 1, "exp_x1", "sobolev").is_err());
    assert!(ExperimentConfig::new(4, "0", 8, "exp_x1", "sobolev").is_err());
    assert!(ExperimentConfig::new(2, "0", 8, "sin_x1", "sobolev").is_err());
    assert!(ExperimentConfig::new(2, "0", 8, "exp_x1", "chebyshev").is_err());
    assert!(ExperimentConfig::new(2, "0", 8, "x3^2", "sobolev").is_err());
}
