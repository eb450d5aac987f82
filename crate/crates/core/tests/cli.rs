use std::path::{Path, PathBuf};
use std::process::Command;

use steiner_core::stp::{read_records, RunStatus};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_steiner-bench"))
}

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("steiner-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> String {
    let out = bin().args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn rho_values() {
    assert_eq!(run(&["rho", "--k", "2"]).trim(), "2.000000");
    assert_eq!(run(&["rho", "--k", "3"]).trim(), "1.666667");
    assert_eq!(run(&["rho", "--k", "4"]).trim(), "1.500000");
}

#[test]
fn run_and_report() {
    let fixtures = data("fixtures");
    let bounds = data("bounds/fixtures.txt");
    let mut csvs = Vec::new();
    for (algo, extra) in [("tm", vec![]), ("gcf", vec!["--win", "abs"]), ("lp", vec!["--k", "4"])] {
        let out = scratch(&format!("{algo}.csv"));
        let mut args = vec!["run", "--algo", algo, "--bounds", bounds.to_str().unwrap(), "--out", out.to_str().unwrap()];
        args.extend(extra);
        args.push(fixtures.to_str().unwrap());
        run(&args);
        let records = read_records(std::fs::File::open(&out).unwrap()).unwrap();
        for name in ["path3", "star", "cycle4"] {
            let r = records.iter().find(|r| r.instance == name).unwrap();
            assert_eq!(r.status, RunStatus::Success, "{algo} on {name}");
            assert!(r.gap_permil.is_some());
        }
        csvs.push(out);
    }
    let mut args = vec![
        "report".to_string(),
        "--bounds".into(),
        bounds.display().to_string(),
        "--groups".into(),
        data("groups.tsv").display().to_string(),
        "--instances".into(),
        fixtures.display().to_string(),
    ];
    args.extend(csvs.iter().map(|p| p.display().to_string()));
    let table = run(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(table.contains("### All instances"));
    assert!(table.contains("### Coverage"));
    assert!(table.contains("gcf k=3"));
}

#[test]
fn zero_time_budget_is_a_timeout() {
    let out = run(&["run", "--algo", "tm", "--time", "0", data("fixtures/star.stp").to_str().unwrap()]);
    let records = read_records(out.as_bytes()).unwrap();
    assert_eq!(records[0].status, RunStatus::Timeout);
}

#[test]
fn invalid_flag_combinations_are_rejected() {
    let star = data("fixtures/star.stp");
    for args in [
        vec!["run", "--algo", "gcf", "--gen", "ondemand", "--win", "rel"],
        vec!["run", "--algo", "lca", "--win", "abs"],
        vec!["run", "--algo", "gcf", "--k", "1"],
        vec!["run", "--algo", "nope"],
    ] {
        let mut args = args;
        args.push(star.to_str().unwrap());
        let out = bin().args(&args).output().unwrap();
        assert!(!out.status.success(), "{args:?} should fail");
    }
}
