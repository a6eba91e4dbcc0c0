use std::f64::consts::FRAC_PI_2;
use std::path::Path;
use std::process::{Command, Output};

use nonlocal_young_cli::SweepTable;

fn nlyoung(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlyoung"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["s", "sigma", "theta_exact", "theta_at1", "theta_at0"]);
    r.records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn angle_at_zero_sigma_is_a_right_angle() {
    let o = nlyoung(&["angle", "--s", "0.5", "--sigma", "0", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["theta"].as_f64().unwrap(), FRAC_PI_2);
    assert_eq!(v["s"].as_f64().unwrap(), 0.5);
    assert!(v["residual"].as_f64().is_some());
}

#[test]
fn angle_text_reports_degrees() {
    let o = nlyoung(&["angle", "--s", "0.5", "--sigma", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("1.5707963267948966"));
    assert!(text.contains("90.000000000000 deg"));
}

#[test]
fn angle_near_one_follows_the_expansion() {
    let o = nlyoung(&["angle", "--s", "0.999", "--sigma", "-0.5", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let theta = v["theta"].as_f64().unwrap();
    let g: f64 = -0.5;
    let slope = -(2.0 * g * std::f64::consts::LN_2 + (1.0 - g) * (1.0 - g).ln()
        - (1.0 + g) * (1.0 + g).ln())
        / (2.0 * (1.0 - g * g).sqrt());
    let expected = std::f64::consts::FRAC_PI_3 + slope * 1e-3;
    assert!((theta - expected).abs() < 1e-5, "{theta} vs {expected}");
}

#[test]
fn bad_arguments_exit_with_two() {
    let o = nlyoung(&["angle", "--s", "0.5", "--sigma", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sigma out of range"));
    let o = nlyoung(&["angle", "--s", "1.5", "--sigma", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = nlyoung(&["angle", "--s", "abc", "--sigma", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = nlyoung(&["sweep", "--s-list", ""]);
    assert_eq!(o.status.code(), Some(2));
    let o = nlyoung(&["sweep", "--sigma-count", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = nlyoung(&["verify", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_has_one_block_per_s_and_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = nlyoung(&[
        "sweep",
        "--s-list",
        "0.05,0.5,0.95",
        "--sigma-count",
        "41",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = read_csv(&path);
    assert_eq!(rows.len(), 123);
    for block in rows.chunks(41) {
        let s0 = &block[0][0];
        assert!(block.iter().all(|r| &r[0] == s0));
        let theta: Vec<f64> = block.iter().map(|r| r[2].parse().unwrap()).collect();
        assert!(theta.windows(2).all(|w| w[1] > w[0]));
    }
}

#[test]
fn single_sigma_sweep_is_all_right_angles() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = nlyoung(&["sweep", "--sigma-count", "1", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let rows = read_csv(&path);
    assert_eq!(rows.len(), 7);
    for r in rows {
        assert_eq!(r[1].parse::<f64>().unwrap(), 0.0);
        assert_eq!(r[2].parse::<f64>().unwrap(), FRAC_PI_2);
    }
}

#[test]
fn sweep_csv_is_deterministic() {
    let args = ["sweep", "--s-list", "0.3,0.7", "--sigma-count", "9"];
    let a = nlyoung(&args);
    let b = nlyoung(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let o = nlyoung(&[
        "sweep",
        "--s-list",
        "0.2,0.8",
        "--sigma-count",
        "5",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let table: SweepTable = serde_json::from_str(&text).unwrap();
    assert_eq!(table.rows.len(), 10);
    let again = serde_json::to_string_pretty(&table).unwrap();
    assert_eq!(serde_json::from_str::<SweepTable>(&again).unwrap(), table);

    // CSV values carry the same bits
    let csv_path = dir.path().join("t.csv");
    let o = nlyoung(&["sweep", "--s-list", "0.2,0.8", "--sigma-count", "5", "--out", csv_path.to_str().unwrap()]);
    assert!(o.status.success());
    for (row, rec) in table.rows.iter().zip(read_csv(&csv_path)) {
        assert_eq!(rec[2].parse::<f64>().unwrap(), row.theta_exact);
    }
}

#[test]
fn unwritable_output_is_reported_with_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("t.csv");
    let o = nlyoung(&["sweep", "--s-list", "0.5", "--sigma-count", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing"));
    assert!(!path.exists());
}

#[test]
fn verify_suites_pass() {
    for suite in ["lemma", "kappa", "expansions", "halfdisk"] {
        let o = nlyoung(&["verify", "--suite", suite]);
        assert!(o.status.success(), "{suite}: {}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains("PASS"));
        assert!(!stdout(&o).contains("FAIL"));
    }
}

#[test]
fn verify_szero_reads_regions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("regions.json");
    std::fs::write(
        &path,
        r#"{"E": {"type": "disk", "center": [0, 0], "radius": 0.3},
            "Omega": {"type": "disk", "center": [0, 0], "radius": 1}}"#,
    )
    .unwrap();
    let o = nlyoung(&["verify", "--suite", "szero", "--regions", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));

    std::fs::write(
        &path,
        r#"{"E": {"type": "disk", "center": [0.9, 0], "radius": 0.3},
            "Omega": {"type": "disk", "center": [0, 0], "radius": 1}}"#,
    )
    .unwrap();
    let o = nlyoung(&["verify", "--suite", "szero", "--regions", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failing_checks_exit_with_one() {
    // an absurdly loose tolerance breaks the 1e-8 lemma comparison
    let o = nlyoung(&["verify", "--suite", "lemma", "--tol", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    assert!(stderr(&o).contains("first failing check"));
}
