use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn qmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmc"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn points_csv_and_json_agree() {
    let csv = qmc(&[
        "points",
        "--family",
        "net",
        "--d",
        "3",
        "--n-start",
        "4",
        "--n-end",
        "12",
        "--seed",
        "3",
    ]);
    let js = qmc(&[
        "points",
        "--family",
        "net",
        "--d",
        "3",
        "--n-start",
        "4",
        "--n-end",
        "12",
        "--seed",
        "3",
        "--format",
        "json",
    ]);
    assert!(csv.status.success() && js.status.success());
    let text = stdout(&csv);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,x2,x3"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    let v = json(&js);
    assert_eq!(v["n_start"], 4);
    let pts: Vec<Vec<f64>> = serde_json::from_value(v["points"].clone()).unwrap();
    assert_eq!(rows, pts);
    assert_eq!(rows.len(), 8);
}

#[test]
fn suffix_ranges_match_full_listing() {
    for family in ["lattice", "net", "halton", "iid"] {
        let full = stdout(&qmc(&["points", "--family", family, "--n-end", "16"]));
        let tail = stdout(&qmc(&[
            "points",
            "--family",
            family,
            "--n-start",
            "5",
            "--n-end",
            "16",
        ]));
        let full: Vec<&str> = full.lines().collect();
        let tail: Vec<&str> = tail.lines().collect();
        assert_eq!(full[0], tail[0]);
        assert_eq!(full[6..], tail[1..], "{family}");
    }
}

#[test]
fn generating_vector_file_gives_the_paper_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("h.txt");
    fs::write(&gen, "# h = (1, 3)\n1\n3\n").unwrap();
    let out = qmc(&[
        "points",
        "--family",
        "lattice",
        "--randomize",
        "none",
        "--gen-file",
        gen.to_str().unwrap(),
        "--n-end",
        "8",
    ]);
    assert!(out.status.success());
    // origin warning for unrandomized sets
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let rows: Vec<(f64, f64)> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows[1], (0.5, 0.5));
    assert_eq!(rows[2], (0.25, 0.75));
    assert_eq!(rows[4], (0.125, 0.375));
    assert_eq!(rows[6], (0.375, 0.125));
}

#[test]
fn empty_range_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    let out = qmc(&["points", "--n-end", "0", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(&path).unwrap(), "x1,x2\n");
}

#[test]
fn integrate_reports_json_and_exit_codes() {
    let out = qmc(&[
        "integrate",
        "--problem",
        "keister",
        "--d",
        "2",
        "--criterion",
        "qmc-lattice-decay",
        "--abs-tol",
        "1e-3",
        "--no-time",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert!((v["estimate"].as_f64().unwrap() - 1.8081864292636199).abs() <= 1e-3);
    assert!(v["error_bound"].as_f64().unwrap() <= 1e-3);
    assert!(v["time_sec"].is_null());
    assert_eq!(v["criterion"], "qmc-lattice-decay");

    let exhausted = qmc(&[
        "integrate",
        "--criterion",
        "qmc-net-decay",
        "--abs-tol",
        "1e-7",
        "--m-max",
        "11",
    ]);
    assert_eq!(exhausted.status.code(), Some(3));
    assert_eq!(json(&exhausted)["flags"][0], "budget_exhausted");

    assert_eq!(
        qmc(&["integrate", "--criterion", "mc-clt", "--family", "lattice"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qmc(&["integrate", "--abs-tol", "-1"]).status.code(),
        Some(2)
    );
    assert_eq!(qmc(&["points", "--bogus"]).status.code(), Some(2));
}

#[test]
fn zero_volatility_asian_has_no_error() {
    let out = qmc(&[
        "integrate",
        "--problem",
        "asian-call",
        "--sigma",
        "0",
        "--strike",
        "90",
        "--criterion",
        "qmc-rep",
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["error_bound"], 0.0);
}

#[test]
fn config_file_supplies_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "family = net\nd = 4\nseed = 11\nn-end = 32\n").unwrap();
    let from_cfg = qmc(&["points", "--config", cfg.to_str().unwrap()]);
    let direct = qmc(&[
        "points", "--family", "net", "--d", "4", "--seed", "11", "--n-end", "32",
    ]);
    assert!(from_cfg.status.success());
    assert_eq!(from_cfg.stdout, direct.stdout);
    let overridden = qmc(&["points", "--config", cfg.to_str().unwrap(), "--seed", "12"]);
    assert_ne!(overridden.stdout, direct.stdout);
}

#[test]
fn compare_writes_table_and_chart() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("cmp.svg");
    let out = qmc(&[
        "compare",
        "--problem",
        "keister",
        "--d",
        "2",
        "--tolerances",
        "1e-1,1e-2",
        "--methods",
        "mc-clt,qmc-net-decay",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "tolerance,method,n,time_sec,estimate,abs_error_vs_oracle"
    );
    assert_eq!(lines.len(), 5);
    for l in &lines[1..] {
        let f: Vec<&str> = l.split(',').collect();
        let tol: f64 = f[0].parse().unwrap();
        let err: f64 = f[5].parse().unwrap();
        assert!(err <= tol, "{l}");
    }
    let chart = fs::read_to_string(&svg).unwrap();
    assert!(chart.starts_with("<svg") && chart.contains("polyline"));
}

#[test]
fn discrepancy_prefers_low_discrepancy_points() {
    let out = qmc(&[
        "discrepancy",
        "--family",
        "net",
        "--d",
        "2",
        "--n-end",
        "256",
        "--compare-iid",
        "--seeds",
        "10",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["ld_better"], true);
    assert!(v["median_cd"].as_f64().unwrap() < v["median_cd_iid"].as_f64().unwrap());
}

#[test]
fn missing_data_dir_file_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qmc"))
        .args(["points", "--family", "net"])
        .env("QMC_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}
