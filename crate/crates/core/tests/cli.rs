use std::process::Command;

fn layerpot() -> Command {
    Command::new(env!("CARGO_BIN_EXE_layerpot"))
}

#[test]
fn sweep_eps_writes_csv_and_reports_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let status = layerpot()
        .args(["sweep-eps", "--domain", "sphere", "--approx", "3", "--n", "16", "--eps-count", "5", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 5);
    assert!(text.starts_with("domain,approx,n,eps,point_id"));
    assert!(String::from_utf8_lossy(&status.stderr).contains("slope"));

    let fit = layerpot().args(["fit", "--input"]).arg(&out).output().unwrap();
    assert!(fit.status.success());
    let stdout = String::from_utf8_lossy(&fit.stdout);
    assert_eq!(stdout.lines().next(), Some("domain,approx,n,point_id,slope"));
    assert_eq!(stdout.lines().count(), 4);
}

#[test]
fn sweep_to_stdout_with_explicit_points() {
    let out = layerpot()
        .args(["sweep-eps", "--domain", "peanut", "--n", "16", "--eps-count", "2", "--point-angles", "1.0,-2.0", "--point", "-0.0894,0.4040,0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().count(), 1 + 2 * 2);
    assert!(stdout.contains(",p0,") && stdout.contains(",q0,"));
}

#[test]
fn gauss_law_prints_minus_one_inside() {
    let out = layerpot().args(["gauss-law", "--domain", "sphere", "--n", "16", "--point", "0,0,0"]).output().unwrap();
    assert!(out.status.success());
    let v: f64 = String::from_utf8_lossy(&out.stdout).trim().parse().unwrap();
    assert!((v + 1.0).abs() < 1e-12);
}

#[test]
fn invalid_input_exits_with_code_two() {
    let off_surface = layerpot().args(["sweep-eps", "--domain", "peanut", "--point", "0.5,0.5,0.5"]).output().unwrap();
    assert_eq!(off_surface.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&off_surface.stderr).contains("error"));

    let bad_range = layerpot().args(["sweep-eps", "--eps-min", "1e-1", "--eps-max", "1e-3"]).output().unwrap();
    assert_eq!(bad_range.status.code(), Some(2));

    let single_n = layerpot().args(["sweep-grid", "--n-list", "32"]).output().unwrap();
    assert_eq!(single_n.status.code(), Some(2));

    let missing = layerpot().args(["fit", "--input", "/nonexistent.csv"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn unknown_domain_is_a_usage_error() {
    let out = layerpot().args(["sweep-eps", "--domain", "torus"]).output().unwrap();
    assert!(!out.status.success());
}
