use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_privsearch");

fn privsearch(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("PRIVSEARCH_THREADS").output().unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn run_writes_report_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("alg1.csv");
    let o = privsearch(&[
        "run", "--strategy", "alg1", "--adversary", "map", "--eps", "9.765625e-4", "--delta", "0.015625", "--L", "4",
        "--trials", "2000", "--seed", "7", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = read(&out);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, privsearch::report::REPORT_HEADER);
    let rec = rdr.records().next().unwrap().unwrap();
    assert_eq!(&rec[1], "alg1");
    assert_eq!(&rec[2], "map");
    assert_eq!(&rec[11], "27");
    assert_eq!(&rec[12], "27");
    assert!(String::from_utf8_lossy(&o.stdout).contains("breach"));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(&cfg, "# replicated bisection\nstrategy = replicated\neps = 9.765625e-4\ndelta = 0.015625\nL = 4\ntrials = 50\n").unwrap();
    let o = privsearch(&["run", "--config", cfg.to_str().unwrap(), "--L", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = String::from_utf8(o.stdout).unwrap();
    let row = csv.lines().nth(1).unwrap();
    assert!(row.starts_with("bayes,replicated,,"));
    assert_eq!(row.split(',').nth(5), Some("2"));
}

#[test]
fn sweep_skips_invalid_points() {
    let o = privsearch(&["sweep", "--strategy", "alg1", "--eps", "geom(1e-2, 1e-3, 0.5)", "--delta", "0.05,0.9", "--L", "2", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = String::from_utf8(o.stdout).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipped"));
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["run", "--strategy", "nope", "--eps", "0.001", "--delta", "0.01", "--L", "2"][..],
        &["run", "--strategy", "alg1", "--eps", "0.001", "--delta", "0.9", "--L", "2"][..],
        &["run", "--strategy", "alg1", "--eps", "0.001,0.002", "--delta", "0.01", "--L", "2"][..],
        &["run", "--strategy", "alg1", "--adversary", "oracle", "--eps", "0.001", "--delta", "0.01", "--L", "2"][..],
        &["bounds", "--L", "15", "--eps-from", "1e-6"][..],
        &["examples", "no_such_example"][..],
        &["frobnicate"][..],
    ] {
        assert_eq!(privsearch(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn invariant_violation_exits_1() {
    // Vanilla bisection cannot hide the target.
    let o = privsearch(&["verify-det", "--strategy", "bisection", "--L", "2", "--delta", "0.0625", "--eps", "0.015625"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("min_covering = 1"));
}

#[test]
fn verify_det_alg3() {
    let o = privsearch(&["verify-det", "--strategy", "alg3", "--L", "7", "--delta", "0.03", "--eps", "9.765625e-4", "--streams", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = String::from_utf8(o.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let rec = rdr.records().next().unwrap().unwrap();
    assert!(rec[8].parse::<usize>().unwrap() >= 7);
}

#[test]
fn bounds_curve_to_cutoff() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.csv");
    let o = privsearch(&[
        "bounds", "--setting", "bayes", "--L", "15", "--delta-link", "4*eps^0.5", "--eps-from", "1e-6", "--eps-to", "cutoff",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = read(&out);
    assert_eq!(text.lines().next(), Some("eps,delta,upper_new,lower_new,upper_prior,lower_prior"));
    let last: f64 = text.lines().last().unwrap().split(',').next().unwrap().parse().unwrap();
    assert!((last - (1.0f64 / 60.0).powi(2)).abs() < 1e-18);
}

#[test]
fn examples_pass() {
    let o = privsearch(&["examples"]);
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8(o.stdout).unwrap();
    assert_eq!(s.lines().filter(|l| l.starts_with("PASS")).count(), 3);
    let o = privsearch(&["examples", "--list"]);
    assert!(String::from_utf8(o.stdout).unwrap().contains("det_large_L7K2"));
}

#[test]
fn attack_train_reports_keys() {
    let o = privsearch(&[
        "attack-train", "--strategy", "alg1", "--eps", "9.765625e-4", "--delta", "0.015625", "--L", "4", "--trials", "500",
        "--hist-train", "5000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("distinct transcript keys"));
    assert!(String::from_utf8(o.stdout).unwrap().lines().nth(1).unwrap().starts_with("bayes,alg1,hist,"));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = [
        "sweep", "--strategy", "alg1", "--adversary", "trunc,hist,map", "--eps", "9.765625e-4", "--delta", "0.015625,0.03125",
        "--L", "3,4", "--trials", "1000", "--hist-train", "4000", "--seed", "5",
    ];
    let with = |threads: &str| {
        let o = Command::new(BIN).args(args).env("PRIVSEARCH_THREADS", threads).output().unwrap();
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    assert_eq!(with("1"), with("8"));
    let bad = Command::new(BIN).args(args).env("PRIVSEARCH_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
