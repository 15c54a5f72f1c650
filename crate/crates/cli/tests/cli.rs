use std::fs;
use std::process::{Command, Output};

use distortion_lab::csvio::read_curve;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distortion-lab")).args(args).output().expect("binary runs")
}

fn lab_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distortion-lab")).args(args).env(key, val).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const MC_SWEEP: &[&str] = &[
    "sweep", "--nt", "4", "--nr", "2", "--eta", "10", "--corr", "exp:0.5", "--snr-db", "0:20:10", "--modes",
    "exact,asymptotic,montecarlo", "--mc-n", "3000", "--seed", "11",
];

#[test]
fn single_point_exact_sweep() {
    let o = lab(&["sweep", "--nt", "2", "--nr", "2", "--eta", "1", "--snr-db", "10", "--modes", "exact"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["snr_db,ed_exact", lines[1]]);
    let v: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 0.002_042_497_236_965_872).abs() < 1e-12);
}

#[test]
fn sweep_is_deterministic_and_thread_independent() {
    let a = lab(MC_SWEEP);
    let b = lab(MC_SWEEP);
    let c = lab_env(MC_SWEEP, "DISTORTION_LAB_THREADS", "1");
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("snr_db,ed_exact,ed_asymptotic,ed_mc,mc_std_error\n"));
    assert!(!text.contains('\r'));
}

#[test]
fn csv_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let mut args = MC_SWEEP.to_vec();
    args.extend(["--out", path.to_str().unwrap()]);
    let o = lab(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let bytes = fs::read(&path).unwrap();
    let curve = read_curve(bytes.as_slice()).unwrap();
    assert_eq!(curve.len(), 3);
    let mut again = Vec::new();
    distortion_lab::csvio::write_curve(&mut again, &curve).unwrap();
    assert_eq!(again, bytes);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("link.cfg");
    fs::write(&cfg, "nt = 1\nnr = 2\neta = 0.99\nsnr_db = 0:4:2\nmodes = exact\n").unwrap();
    let o = lab(&["sweep", "--config", cfg.to_str().unwrap(), "--modes", "asymptotic"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("snr_db,ed_asymptotic\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn configuration_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["sweep", "--nt", "0", "--nr", "2", "--eta", "1"],
        &["sweep", "--nr", "2", "--eta", "1"],
        &["sweep", "--nt", "2", "--nr", "2", "--eta", "1", "--corr", "eig:0.5,1,1.5"],
        &["sweep", "--nt", "2", "--nr", "2", "--eta", "1", "--corr", "exp:0"],
        &["sweep", "--nt", "2", "--nr", "2", "--eta", "1", "--snr-db", "10:0:1"],
        &["sweep", "--nt", "2", "--nr", "2", "--eta", "1", "--modes", "montecarlo", "--mc-n", "10"],
        &["sweep", "--nt", "2", "--nr", "2", "--eta", "-1"],
        &["asymptotic", "--config", "/nonexistent/link.cfg"],
    ];
    for args in cases {
        let o = lab(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert_eq!(stderr(&o).trim().lines().count(), 1, "{args:?}: {}", stderr(&o));
    }
    let o = lab_env(&["asymptotic", "--nt", "2", "--nr", "2", "--eta", "1"], "DISTORTION_LAB_THREADS", "zero");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failure_names_point_and_mode() {
    // logarithmic factor on a 3x3 link is undefined at 0 dB
    let o = lab(&["sweep", "--nt", "3", "--nr", "3", "--eta", "0.6666666666666666", "--snr-db", "0:10:5", "--modes", "asymptotic"]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("snr=0 dB") && err.contains("asymptotic"), "{err}");
}

#[test]
fn asymptotic_report_formats() {
    let o = lab(&["asymptotic", "--nt", "2", "--nr", "2", "--eta", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("MSCBR, l=1, Δ*=3, μ*=8, ε=0"));
    let v: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(v["regime"], "MSCBR");
    assert_eq!(v["mu"], 8.0);
    assert_eq!(v["log_power"], 0);

    let o = lab(&["asymptotic", "--nt", "4", "--nr", "2", "--eta", "10"]);
    assert!(stdout(&o).starts_with("HSCBR, l=0, Δ*=0.4,"));
}

#[test]
fn figure_two_writes_table_and_charts() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["figure", "fig2", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["fig2.csv", "fig2a.svg", "fig2b.svg"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let svg = fs::read_to_string(dir.path().join("fig2b.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
    let mut rdr = csv::Reader::from_path(dir.path().join("fig2.csv")).unwrap();
    let ratio_at = |rows: &[csv::StringRecord], db: f64| -> f64 {
        let r = rows.iter().find(|r| r[0].parse::<f64>().unwrap() == db).unwrap();
        r[4].parse().unwrap()
    };
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert!(ratio_at(&rows, 30.0) > ratio_at(&rows, 20.0));
    assert!(ratio_at(&rows, 20.0) > 1.0);
}

#[test]
fn figure_four_a_orders_by_correlation() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["figure", "fig4a", "--out", dir.path().to_str().unwrap(), "--mc-n", "1000"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_path(dir.path().join("fig4a.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), ["r", "snr_db", "ed_exact", "ed_asymptotic", "ed_mc", "mc_std_error"]);
    let at30: Vec<f64> = rdr
        .records()
        .map(Result::unwrap)
        .filter(|r| r[1].parse::<f64>().unwrap() == 30.0)
        .map(|r| r[2].parse().unwrap())
        .collect();
    assert_eq!(at30.len(), 5);
    assert!(at30.windows(2).all(|w| w[1] > w[0]), "{at30:?}");
}
