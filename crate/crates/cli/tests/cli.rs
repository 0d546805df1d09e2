//! End-to-end checks of the binary: table output, determinism of
//! simulation output, exit codes, and atomic file writing.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sphere-profile"))
}

#[test]
fn density_table_has_expected_row_at_zero() {
    let out = bin()
        .args(["density-table", "--t", "1", "--xmin", "-6", "--xmax", "6", "--step", "0.1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# sphere-profile"));
    let header = text.lines().nth(2).unwrap();
    assert_eq!(header, "x,p,p_prime");
    // 121 data rows for this grid
    assert_eq!(text.lines().count(), 3 + 121);
    let zero_row = text
        .lines()
        .find(|l| l.starts_with("0.0000000000000000e0,"))
        .expect("row at x = 0");
    let p: f64 = zero_row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((p - 0.2848676139753767).abs() < 1e-12, "p(1,0) = {p}");
}

#[test]
fn simulate_z_is_byte_identical_across_runs() {
    let run = || {
        bin()
            .args(["simulate-z", "--w0", "0", "--T", "10", "--dt", "0.001", "--seed", "7"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout.len() > 10_000, true);
}

#[test]
fn thread_cap_does_not_change_output() {
    let run = |threads: &str| {
        bin()
            .env("SPHERE_PROFILE_THREADS", threads)
            .args(["experiment", "gamma", "--n", "400", "--seed", "11"])
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("2");
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn experiment_writes_json_report_and_exits_zero_on_pass() {
    let dir = std::env::temp_dir().join("sphere_profile_cli_test");
    let _ = std::fs::remove_dir_all(&dir);
    let out_path = dir.join("gamma.json");
    let out = bin()
        .args([
            "experiment",
            "gamma",
            "--n",
            "500",
            "--seed",
            "5",
            "--out",
            out_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["name"], "gamma");
    assert!(report["verdicts"].as_array().unwrap().len() >= 3);
    // no leftover temp file from the atomic write
    let leftovers: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().ends_with(".tmp"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn usage_errors_exit_one() {
    let out = bin().args(["experiment", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["density-table", "--t", "1", "--xmin", "5", "--xmax", "1", "--step", "0.1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    // t <= 0 is a runtime error, also exit 1
    let out = bin()
        .args(["density-table", "--t", "-1", "--xmin", "0", "--xmax", "1", "--step", "0.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn build_profile_emits_curve_with_provenance() {
    let out = bin()
        .args(["build-profile", "--x-max", "1", "--points", "4", "--seed", "9", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["columns"][1], "L");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert!(r[1].as_f64().unwrap() > 0.0); // L > 0
    }
    // tau_star decreasing in x
    let taus: Vec<f64> = rows.iter().map(|r| r[3].as_f64().unwrap()).collect();
    assert!(taus.windows(2).all(|w| w[0] > w[1]));
}
