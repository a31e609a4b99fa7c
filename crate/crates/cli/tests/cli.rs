use std::process::{Command, Output};

use repfn_core::{SearchReport, Witness};
use serde_json::Value;

fn repfn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repfn"))
        .args(args)
        .env_remove("REPFN_MAX_M")
        .output()
        .expect("spawn repfn")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn check_balanced_set() {
    let out = repfn(&["check", "-m", "4", "-k", "1,2", "-A", "0,1", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["verdicts"]["predicate"], true);
    assert_eq!(v["verdicts"]["oracle"], true);
    assert_eq!(
        v["profiles"]["set"]["counts"],
        serde_json::json!([1, 1, 1, 1])
    );
    assert_eq!(
        v["profiles"]["complement"]["counts"],
        serde_json::json!([1, 1, 1, 1])
    );
    assert_eq!(v["gcd_profile"]["d"], 2);
}

#[test]
fn check_unbalanced_and_bad_input() {
    let out = repfn(&["check", "-m", "4", "-k", "1,2", "-A", "0,2"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("balanced (predicate): false"));
    assert_eq!(
        code(&repfn(&["check", "-m", "4", "-k", "1,2", "-A", "0,9"])),
        65
    );
    assert_eq!(
        code(&repfn(&["check", "-m", "4", "-k", "1,2", "-A", "0,x"])),
        64
    );
    assert_eq!(
        code(&repfn(&["check", "-m", "4", "-k", "1,2", "-A", "1,1"])),
        64
    );
    assert_eq!(
        code(&repfn(&["check", "-m", "1", "-k", "1,2", "-A", "0"])),
        64
    );
    assert_eq!(
        code(&repfn(&["check", "-m", "4", "-k", "1,2,3", "-A", "0"])),
        64
    );
    assert_eq!(code(&repfn(&["frobnicate"])), 64);
}

#[test]
fn negative_weights_are_canonicalized() {
    let out = repfn(&["check", "-m", "4", "-k", "-3,6", "-A", "0,1", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["instance"]["weights"], serde_json::json!([1, 2]));
}

#[test]
fn exists_reports() {
    let out = repfn(&["exists", "-m", "12", "-k", "4,6", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["counts"], 64);
    assert_eq!(v["verdicts"]["divisibility"], true);
    assert_eq!(v["verdicts"]["parity"], true);
    assert_eq!(v["witness"]["members"].as_array().unwrap().len(), 6);

    let out = repfn(&["exists", "-m", "2", "-k", "1,2", "--json"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["counts"], 0);
    assert_eq!(code(&repfn(&["exists", "-m", "3", "-k", "1,1"])), 1);
}

#[test]
fn profile_any_arity() {
    let out = repfn(&["profile", "-m", "2", "-k", "1,1,2", "-A", "0", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["set"]["counts"], serde_json::json!([1, 0]));
    assert_eq!(v["complement"]["counts"], serde_json::json!([1, 0]));
}

#[test]
fn enumerate_modes_agree_and_roundtrip() {
    let oracle = repfn(&[
        "enumerate",
        "-m",
        "4",
        "-k",
        "1,2",
        "--mode",
        "oracle",
        "--json",
    ]);
    let predicate = repfn(&[
        "enumerate",
        "-m",
        "4",
        "-k",
        "1,2",
        "--mode",
        "predicate",
        "--json",
    ]);
    assert_eq!(code(&oracle), 0);
    let a: SearchReport = serde_json::from_slice(&oracle.stdout).unwrap();
    let b: SearchReport = serde_json::from_slice(&predicate.stdout).unwrap();
    assert_eq!(a.counts, 4);
    assert_eq!(a.witnesses, b.witnesses);
    // re-serializing the parsed report reproduces the emitted document
    let reparsed: Value = serde_json::to_value(&a).unwrap();
    assert_eq!(reparsed, json(&oracle));
}

#[test]
fn enumerate_bounds() {
    assert_eq!(code(&repfn(&["enumerate", "-m", "17", "-k", "1,1"])), 65);
    let out = Command::new(env!("CARGO_BIN_EXE_repfn"))
        .args([
            "enumerate",
            "-m",
            "18",
            "-k",
            "2,4",
            "--mode",
            "oracle",
            "--witness-cap",
            "0",
        ])
        .env("REPFN_MAX_M", "18")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("truncated"));
}

#[test]
fn pairs_and_tary() {
    let out = repfn(&["pairs", "-m", "2", "-k", "1,1", "--json"]);
    let report: SearchReport = serde_json::from_slice(&out.stdout).unwrap();
    let zero = repfn_core::ResidueSet::from_members(2, [0]).unwrap();
    let one = repfn_core::ResidueSet::from_members(2, [1]).unwrap();
    assert!(report.witnesses.contains(&Witness::Pair(zero, one)));

    let out = repfn(&["tary", "-m", "2", "-k", "1,1,2", "--csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "0\n1\n");
    assert_eq!(code(&repfn(&["tary", "-m", "2", "-k", "1,1,1"])), 1);
    assert_eq!(code(&repfn(&["tary", "-m", "4", "-k", "1,1"])), 64);

    let out = repfn(&["pairs", "-m", "4", "-k", "1,1", "--csv"]);
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "0,2"), "{text}");
    assert!(
        text.lines().any(|l| l == "\"0,1\",\"2,3\""),
        "multi-element literals are quoted: {text}"
    );
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = repfn(&[
        "enumerate",
        "-m",
        "6",
        "-k",
        "1,1",
        "--json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let report: SearchReport =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report.counts, 20);
}

#[test]
fn verify_exit_codes() {
    let out = repfn(&["verify", "--max-m", "3"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("all checks passed"));
    assert_eq!(code(&repfn(&["verify", "--max-m", "1"])), 64);
    assert_eq!(code(&repfn(&["verify", "--scope", "nonsense"])), 64);
}

#[test]
fn verify_full_sweep() {
    let out = repfn(&["verify", "--max-m", "11", "--json"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v = json(&out);
    for check in v["checks"].as_array().unwrap() {
        assert_eq!(check["failures"], 0, "{check}");
    }
}

/// At m = 12 the closed-form predicate and count first disagree with brute
/// force; the factor-wise criterion and the exact count do not.
#[test]
fn verify_at_twelve() {
    let out = repfn(&["verify", "--max-m", "12", "--json"]);
    assert_eq!(code(&out), 2, "{}", stdout(&out));
    let v = json(&out);
    for check in v["checks"].as_array().unwrap() {
        let name = check["name"].as_str().unwrap();
        let expected = match name {
            "theorem" => 288,
            "counting" => 12,
            _ => 0,
        };
        assert_eq!(check["failures"], expected, "{check}");
    }
}

#[test]
fn check_reports_factor_verdict() {
    let out = repfn(&[
        "check",
        "-m",
        "12",
        "-k",
        "4,6",
        "-A",
        "0,1,2,3,7,8",
        "--json",
    ]);
    assert_eq!(code(&out), 2);
    let v = json(&out);
    assert_eq!(v["verdicts"]["predicate"], false);
    assert_eq!(v["verdicts"]["factors"], true);
    assert_eq!(v["verdicts"]["oracle"], true);

    let out = repfn(&["exists", "-m", "12", "-k", "4,6", "--json"]);
    let v = json(&out);
    assert_eq!(v["counts"], 64);
    assert_eq!(v["exact_counts"], 88);

    let out = repfn(&[
        "enumerate",
        "-m",
        "12",
        "-k",
        "4,6",
        "--mode",
        "factors",
        "--json",
    ]);
    let report: SearchReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.counts, 88);
}
