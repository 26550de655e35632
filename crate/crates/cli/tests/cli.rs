use std::process::{Command, Output};

fn divcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divcorr")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SCAN: &[&str] =
    &["correlate", "--r1", "2", "--r2", "3", "--f1", "1", "--f2", "2", "--mode", "sharp", "--kmin", "14", "--kmax", "23"];

#[test]
fn main_term_json_has_the_classical_constant() {
    let o = divcorr(&["main-term", "--r1", "1", "--r2", "1", "--f1", "0", "--f2", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let a00 = v["c"]["a00"].as_f64().unwrap();
    assert!((a00 - 6.0 / std::f64::consts::PI.powi(2)).abs() < 1e-14);
    assert!(v["polynomial"]["q11"].as_f64().unwrap() > 0.0);
}

#[test]
fn main_term_with_x_reports_both_main_terms() {
    let o = divcorr(&["main-term", "--r1", "2", "--r2", "3", "--f1", "1", "--f2", "2", "--x", "4096"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["sharp"].as_f64().unwrap() > 0.0);
    assert_eq!(v["smooth"]["empty_support"], serde_json::Value::Bool(false));
}

#[test]
fn correlate_csv_contract() {
    let mut args = SCAN.to_vec();
    args.extend(["--out", "csv"]);
    let o = divcorr(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# divcorr-schema v1");
    assert_eq!(lines[1], "x,brute,main,residual,norm_sharp");
    let data: Vec<&str> = lines[2..].iter().copied().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 10);
    assert!(data[0].starts_with("16384,"));
    assert!(data[9].starts_with("8388608,"));
    for row in &data {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 5);
        for c in cells {
            let v: f64 = c.parse().unwrap();
            // shortest round-trip form
            assert_eq!(format!("{v:?}").parse::<f64>().unwrap(), v);
        }
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let mut args = SCAN[..SCAN.len() - 2].to_vec();
        args.extend(["--kmax", "18", "--output", path.to_str().unwrap()]);
        let o = divcorr(&args);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let j1 = divcorr(&["selftest", "--out", "json", "--seed", "99"]);
    let j2 = divcorr(&["selftest", "--out", "json", "--seed", "99"]);
    assert_eq!(j1.stdout, j2.stdout);
}

#[test]
fn smooth_scan_uses_the_smooth_norm() {
    let o = divcorr(&[
        "correlate", "--r1", "2", "--r2", "3", "--f1", "1", "--f2", "2", "--mode", "smooth", "--kmin", "12", "--kmax", "16",
        "--out", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    assert!(v["exponent"].is_f64());
    assert_eq!(v["mode"], "smooth");
}

#[test]
fn geometric_step_densifies_the_grid() {
    let o = divcorr(&[
        "correlate", "--r1", "1", "--r2", "1", "--f1", "0", "--f2", "1", "--kmin", "10", "--kmax", "12",
        "--geometric-step", "1.5",
    ]);
    let rows = stdout(&o).lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert_eq!(rows, 4);
}

#[test]
fn zero_shift_is_a_usage_error() {
    let o = divcorr(&["main-term", "--r1", "2", "--r2", "4", "--f1", "1", "--f2", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("h ≠ 0"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(divcorr(&["correlate", "--r1", "1"]).status.code(), Some(2));
    assert_eq!(divcorr(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(divcorr(&["main-term", "--r1", "x"]).status.code(), Some(2));
    assert_eq!(divcorr(&["split-check", "--x", "3"]).status.code(), Some(2));
}

#[test]
fn tolerance_failure_exits_1() {
    let ok = divcorr(&["split-check", "--x", "10000", "--samples", "50"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = divcorr(&["split-check", "--x", "10000", "--samples", "50", "--tol", "-1"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn selftest_passes() {
    let o = divcorr(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().skip(2).all(|l| l.contains(",true,")));
}

#[test]
fn tables() {
    let o = divcorr(&["kloosterman", "--modulus", "7", "--mmax", "1", "--nmax", "1"]);
    let t = stdout(&o);
    assert!(t.contains("\n1,1,7,"));
    let o = divcorr(&["ramanujan", "--qmax", "4", "--nmax", "0"]);
    // c_q(0) = φ(q)
    assert!(stdout(&o).ends_with("1,0,1\n2,0,1\n3,0,2\n4,0,2\n"));
    let o = divcorr(&["shat", "--v", "5", "--n", "3", "--f1", "2"]);
    assert_eq!(stdout(&o).lines().count(), 2 + 4);
}

#[test]
fn voronoi_small_grid() {
    let o = divcorr(&["verify-voronoi", "--moduli", "1,2", "--x", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2 + 3);
}
