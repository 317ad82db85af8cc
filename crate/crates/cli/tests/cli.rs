use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drinfeld-l")).args(args).output().unwrap()
}

#[test]
fn gamma_table() {
    let out = run(&["gamma", "--q", "3", "--a", "1", "--b", "2", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "gamma_0 = 1");
    assert_eq!(lines[1], "gamma_1 = (2)/(T^3+2*T)");
}

#[test]
fn usage_and_precondition_errors_exit_2() {
    for args in [
        vec!["verify", "--q", "3", "--n", "2", "--a", "0", "--b", "2"],
        vec!["verify", "--q", "4"],
        vec!["taelman", "--b", "0"],
        vec!["taelman", "--a", "T"],
        vec!["gamma", "--a", "T^"],
        vec!["regulator", "--threads", "0"],
        vec!["bogus"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(!err.trim().is_empty(), "{args:?}");
    }
}

#[test]
fn verify_writes_schema_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = run(&[
        "verify", "--q", "3", "--n", "1", "--a", "0", "--b", "2", "--max-prime-deg", "8", "--prec", "24", "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(json["q"], 3);
    assert_eq!(json["a"], "0");
    assert_eq!(json["verified"], true);
    assert_eq!(json["lhs"]["prec"], 24);
    assert!(json["matched_coefficients"].as_u64().unwrap() >= 12);
}

#[test]
fn threads_do_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut seen = Vec::new();
    for threads in ["1", "3"] {
        let path = dir.path().join(format!("t{threads}.json"));
        let out = run(&[
            "taelman", "--q", "5", "--n", "2", "--a", "1", "--b", "4", "--max-prime-deg", "3", "--threads", threads,
            "--json", path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        seen.push((out.stdout, std::fs::read(&path).unwrap()));
    }
    assert_eq!(seen[0], seen[1]);
}

#[test]
fn selftest_and_motive_checks_pass() {
    assert_eq!(run(&["selftest"]).status.code(), Some(0));
    let out = run(&["verify", "--checks", "motive", "--q", "5", "--n", "2", "--a", "2", "--b", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run(&["zeta", "--q", "3", "--n", "2", "--max-prime-deg", "3"]).status.code(), Some(0));
}
