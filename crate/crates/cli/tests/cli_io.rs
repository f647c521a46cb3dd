//! Exit codes and file handling of the command-line interface.

use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_qmc")
}

fn corpus(rel: &str) -> String {
    format!("{}/../../corpus/{rel}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn search_with_tiny_bound_exits_one() {
    // q must avoid 2 Delta, so a bound of 2 admits no candidate
    let out = Command::new(bin())
        .args(["search", "--job", &corpus("jobs/q_b3-17_gaussian.json"), "--q-bound", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn search_witness_exits_zero() {
    let out = Command::new(bin())
        .args(["search", "--job", &corpus("jobs/q_b3-17_gaussian.json"), "--q-bound", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("witnesses: 2"));
}

#[test]
fn search_budget_exits_three() {
    let out = Command::new(bin())
        .args(["search", "--job", &corpus("jobs/sqrt5_b11-11_zeta5.json"), "--q-bound", "45"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("inconclusive"));
}

#[test]
fn malformed_input_exits_two_with_diagnostic() {
    let dir = std::env::temp_dir().join("qmc_cli_io");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"poly\": [1,").unwrap();
    let out = Command::new(bin())
        .args(["fieldinfo", "--field", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line") && err.contains("column"), "diagnostic: {err}");
}

#[test]
fn certify_verify_roundtrip_via_files() {
    let dir = std::env::temp_dir().join("qmc_cli_roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let cert_path = dir.join("cert.json");
    let out = Command::new(bin())
        .args([
            "certify",
            "--job",
            &corpus("jobs/q_b3-17_gaussian.json"),
            "--q",
            "5",
            "--q-index",
            "0",
            "--p",
            "17",
            "--p-index",
            "0",
            "--json",
            "--out",
            cert_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(bin())
        .args(["verify", "--cert", cert_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // tampering flips the exit code to 1
    let text = std::fs::read_to_string(&cert_path).unwrap();
    let tampered = text.replace("\"p\":\"17\"", "\"p\":\"19\"");
    assert_ne!(text, tampered);
    let bad_path = dir.join("tampered.json");
    std::fs::write(&bad_path, tampered).unwrap();
    let out = Command::new(bin())
        .args(["verify", "--cert", bad_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    // garbage input exits 2
    let garbage = dir.join("garbage.json");
    std::fs::write(&garbage, "]").unwrap();
    let out = Command::new(bin())
        .args(["verify", "--cert", garbage.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_non_witness_exits_one() {
    let out = Command::new(bin())
        .args([
            "certify",
            "--job",
            &corpus("jobs/q_b3-17_gaussian.json"),
            "--q",
            "13",
            "--q-index",
            "0",
            "--p",
            "17",
            "--p-index",
            "0",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("not a witness"));
}

#[test]
fn seed_corpus_runs_every_field() {
    let out = Command::new(bin())
        .args(["fieldinfo", "--seed-corpus", &corpus("")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    // one header per bundled field file, sorted
    let count = text.matches("== ").count();
    assert_eq!(count, 9);
    // deterministic across runs
    let again = Command::new(bin())
        .args(["fieldinfo", "--seed-corpus", &corpus("")])
        .output()
        .unwrap();
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn precision_env_override_accepted() {
    let out = Command::new(bin())
        .env("QMC_PRECISION_BITS", "256")
        .args(["fieldinfo", "--field", &corpus("fields/sqrt5.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("n_lcm = 60"));
}

#[test]
fn weil_sets_budget_exit() {
    let out = Command::new(bin())
        .args([
            "weil-sets",
            "--field",
            &corpus("fields/q.json"),
            "--ell",
            "5",
            "--f",
            "1",
            "--e",
            "2",
            "--digit-budget",
            "1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
