//! End-to-end tests of the command-line binary: exit codes, output
//! formats, file writing and JSON round-trips.

use std::process::Command;

fn qrep(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qrep"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn build_json_to_stdout() {
    let (code, stdout, _) = qrep(&[
        "--algebra", "A2", "--weight", "2,1", "--t", "0.3",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["algebra"], "A2");
    assert_eq!(v["dim"], 15);
    assert_eq!(v["weight"][0], 2);
    assert_eq!(v["basis"].as_array().unwrap().len(), 15);
    for name in ["xp1", "xm1", "xp2", "xm2", "h1", "h2"] {
        assert!(v["matrices"][name].is_array(), "{name}");
    }
}

#[test]
fn c2_is_an_alias_of_b2() {
    let (code, stdout, _) = qrep(&["--algebra", "C2", "--weight", "1,1", "--t", "0.3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["algebra"], "B2");
    assert_eq!(v["dim"], 16);
}

#[test]
fn usage_errors_exit_two() {
    // Unknown algebra tag.
    assert_eq!(qrep(&["--algebra", "E8", "--weight", "1,0", "--t", "0.3"]).0, 2);
    // Malformed weight.
    assert_eq!(qrep(&["--algebra", "A2", "--weight", "1,x", "--t", "0.3"]).0, 2);
    // Wrong component count.
    assert_eq!(qrep(&["--algebra", "A1", "--weight", "1,2", "--t", "0.3"]).0, 2);
    // Missing --t in build mode.
    assert_eq!(qrep(&["--algebra", "A2", "--weight", "1,0"]).0, 2);
    // Missing required flag entirely (clap usage error).
    assert_eq!(qrep(&["--algebra", "A2"]).0, 2);
    // Negative t is an invalid parameter, not a numeric failure.
    assert_eq!(qrep(&["--algebra", "A2", "--weight", "1,0", "--t", "-0.3"]).0, 2);
}

#[test]
fn verify_mode_passes_and_reports() {
    let (code, stdout, _) = qrep(&[
        "--algebra", "G2", "--weight", "1,0", "--t", "0.5", "--mode", "verify",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["residuals"]["cartan"].as_f64().unwrap() < 1e-9);
    assert!(v["oracle_diff"].as_f64().unwrap() < 1e-8);
}

#[test]
fn verify_failure_exits_one() {
    let (code, stdout, stderr) = qrep(&[
        "--algebra", "A2", "--weight", "2,1", "--t", "0.5",
        "--mode", "verify", "--tol", "1e-300",
    ]);
    assert_eq!(code, 1, "stdout: {stdout} stderr: {stderr}");
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn character_and_spectra_modes() {
    let (code, stdout, _) = qrep(&[
        "--algebra", "A2", "--weight", "2,1", "--mode", "character",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["dim"], 15);
    assert_eq!(v["terms"].as_array().unwrap().iter()
        .map(|t| t["mult"].as_i64().unwrap()).sum::<i64>(), 15);

    let (code, stdout, _) = qrep(&[
        "--algebra", "B2", "--weight", "1,1", "--mode", "spectra", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("level,lambda_exp,alpha_exp,n1,n2,mult\n"));
    // 16 states in 12 weight classes, plus the header line.
    assert_eq!(stdout.lines().count(), 1 + 12);
}

#[test]
fn output_file_and_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rep.json");
    let (code, _, _) = qrep(&[
        "--algebra", "B2", "--weight", "1,1", "--t", "0.4",
        "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let rebuilt = qrep::export::from_json(&text).unwrap();
    let direct = qrep::build(qrep::AlgebraKind::B2, &[1, 1], 0.4, 1e-9).unwrap();
    for i in 0..2 {
        assert_eq!(rebuilt.xm[i], direct.xm[i]);
        assert_eq!(rebuilt.h[i], direct.h[i]);
    }
    let r1 = qrep::verify::check_relations(&rebuilt).max_residual();
    let r2 = qrep::verify::check_relations(&direct).max_residual();
    assert_eq!(r1, r2, "round trip must reproduce identical residuals");
}

#[test]
fn csv_output_writes_one_file_per_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("a2rep");
    let (code, _, _) = qrep(&[
        "--algebra", "A2", "--weight", "1,0", "--t", "0.3",
        "--format", "csv", "--output", prefix.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    for name in ["xp1", "xm1", "xp2", "xm2", "h1", "h2"] {
        let f = dir.path().join(format!("a2rep.{name}.csv"));
        let body = std::fs::read_to_string(&f).unwrap();
        assert!(body.starts_with("row,col,value\n"), "{name}");
    }
}
