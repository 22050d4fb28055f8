use kzcocycle_core::lyapunov::simulate_spectrum;
use kzcocycle_core::rauzy::build_diagram;
use kzcocycle_core::report::{
    export_report, read_verification_report, render, run_verification_suite, Artifact, CheckStatus, ExportFormat,
    Grid,
};
use kzcocycle_core::{AlphaParam, KzError, SimConfig};

fn a(n: i64, d: i64) -> AlphaParam {
    AlphaParam::new(n, d).unwrap()
}

#[test]
fn json_round_trip() {
    let grid = Grid {
        surfaces: vec![(2, 5), (3, 4)],
        cocycles: vec![(2, a(1, 4)), (3, a(1, 5))],
        ..Grid::default()
    };
    let report = run_verification_suite(&grid).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    export_report(&Artifact::Verification(&report), ExportFormat::Json, &path).unwrap();
    assert_eq!(read_verification_report(&path).unwrap(), report);
    let again = run_verification_suite(&grid).unwrap();
    assert_eq!(
        render(&Artifact::Verification(&report), ExportFormat::Json).unwrap(),
        render(&Artifact::Verification(&again), ExportFormat::Json).unwrap()
    );
}

#[test]
fn every_check_once_per_point() {
    let report = run_verification_suite(&Grid::default()).unwrap();
    let mut seen = std::collections::HashSet::new();
    for c in &report.checks {
        assert!(seen.insert((c.check_id.clone(), c.params.clone())), "{}", c.line());
    }
    assert_eq!(report.summary.fail, 0);
    for c in &report.checks {
        if c.status == CheckStatus::Flagged {
            assert_eq!(c.check_id, "surface.stratum_label");
        }
    }
}

#[test]
fn dot_of_d3() {
    let g = build_diagram(3).unwrap();
    let dot = render(&Artifact::Diagram(&g), ExportFormat::Dot).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count(), 3);
    assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 6);
}

#[test]
fn spectrum_csv_shape() {
    let r = simulate_spectrum(&SimConfig::new(3, a(1, 7), 1_000, 5, 2)).unwrap();
    let csv = render(&Artifact::Spectrum(&r), ExportFormat::Csv).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("trial,index,exponent,stderr"));
    assert_eq!(lines.count(), 5 * 3);
    assert!(matches!(
        render(&Artifact::Spectrum(&r), ExportFormat::Dot),
        Err(KzError::UnsupportedFormat { .. })
    ));
}

#[test]
fn missing_directory_is_an_io_failure() {
    let g = build_diagram(3).unwrap();
    let err = export_report(
        &Artifact::Diagram(&g),
        ExportFormat::Dot,
        std::path::Path::new("/nonexistent/dir/d3.dot"),
    );
    assert!(matches!(err, Err(KzError::Io(_))));
}
