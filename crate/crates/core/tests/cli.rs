mod common;

use common::drops;
use spacelike_drops::io::{read_document, Document};

fn stdout(args: &[&str]) -> String {
    let out = drops(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn table_runs_are_deterministic() {
    let out = common::determinism();
    assert!(out.pass, "{}", out.detail);
}

#[test]
fn solve_radius_recovers_tabulated_apex() {
    let json = stdout(&[
        "solve", "--kappa", "1", "--beta", "1.81411", "--radius", "3",
    ]);
    let doc: Document = serde_json::from_str(&json).unwrap();
    let Document::Solution(sol) = doc else {
        panic!("expected a solution")
    };
    approx::assert_abs_diff_eq!(sol.solution.u0, 1.0, epsilon = 1e-4);
}

#[test]
fn solve_then_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("drop.json");
    let p = path.to_str().unwrap();
    stdout(&[
        "solve", "--kappa", "2", "--beta", "1", "--volume", "5", "--verify", "-o", p,
    ]);
    let doc = read_document(&path).unwrap();
    assert!(matches!(doc, Document::Solution(_)));
    let again = stdout(&["export", "--input", p, "--format", "json"]);
    assert_eq!(again, std::fs::read_to_string(&path).unwrap());
    let csv = stdout(&["export", "--input", p, "--format", "csv"]);
    assert_eq!(csv.lines().next(), Some("r,u,du,v,k_m,k_l"));
    assert_eq!(csv.lines().count(), doc.profile().samples().len() + 1);
}

#[test]
fn analyze_emits_features() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pendent.json");
    let p = path.to_str().unwrap();
    stdout(&["analyze", "--kappa", "-2", "--u0", "-1", "-o", p]);
    let Document::Analysis(a) = read_document(&path).unwrap() else {
        panic!("expected analysis")
    };
    assert!(a.features.zeros.len() >= 5);
    assert!(a.report.all_pass());
}

#[test]
fn verify_passes_and_reports() {
    let out = drops(&["verify", "--kappa", "1", "--u0", "1", "--radius", "3"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("PASS")));
    assert!(!text.lines().any(|l| l.starts_with("FAIL")));
}

#[test]
fn exit_codes() {
    assert_eq!(drops(&["solve", "--kappa", "1"]).status.code(), Some(2));
    assert_eq!(
        drops(&["solve", "--kappa", "1", "--beta", "1", "--radius", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        drops(&["solve", "--kappa", "1", "--beta", "3", "--plane", "2"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn csv_output_parses_at_full_precision() {
    let csv = stdout(&[
        "solve", "--kappa", "1", "--beta", "1", "--radius", "2", "--format", "csv",
    ]);
    let last: Vec<f64> = csv
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(last.len(), 6);
    approx::assert_relative_eq!(last[0], 2.0, max_relative = 1e-15);
    approx::assert_relative_eq!(last[3], 1f64.sinh(), max_relative = 1e-9);
}
