//! End-to-end behaviour of the `aisr` binary: output and exit codes.

use std::fs;
use std::process::{Command, Output};

fn aisr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aisr")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn check_exit_codes() {
    assert_eq!(code(&aisr(&["check", "S_2", "xy ≈ yx"])), 0);
    let fails = aisr(&["check", "L_2", "xy ≈ yx"]);
    assert_eq!(code(&fails), 1);
    assert!(stdout(&fails).starts_with("fails"));
    assert_eq!(code(&aisr(&["check", "S_99", "x ≈ x"])), 2);
    assert_eq!(code(&aisr(&["check", "S_2", "xy ≈"])), 3);
    assert_eq!(code(&aisr(&["check", "S_(4,401)", "xyzw ≈ wzyx", "--budget", "10"])), 4);
}

#[test]
fn order_two_census() {
    let o = aisr(&["enumerate", "--order", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l == "count 6"), "{}", stdout(&o));
}

#[test]
fn embedding_into_a_power() {
    let o = aisr(&["embed", "M_2", "M_2^2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("embedding 1->(1,1)"));
    assert_eq!(code(&aisr(&["embed", "S_(4,401)", "M_2^2"])), 1);
}

#[test]
fn exact_oracle_passes() {
    let o = aisr(&["oracle-test", "s41", "--vars", "2", "--word-len", "3", "--summands", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("equivalence: exact"));
}

#[test]
fn record_output_is_deterministic() {
    let args = ["--format", "record", "catalog", "show", "S_(4,435)"];
    let a = aisr(&args);
    let b = aisr(&["--jobs", "1", "--format", "record", "catalog", "show", "S_(4,435)"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).lines().all(|l| l.contains('=')), "{}", stdout(&a));
    let e1 = aisr(&["--format", "record", "enumerate", "--order", "3"]);
    let e2 = aisr(&["--format", "record", "--jobs", "2", "enumerate", "--order", "3"]);
    assert_eq!(e1.stdout, e2.stdout);
    assert_eq!(stdout(&e1).trim(), "order=3 count=61");
}

#[test]
fn verify_single_claim_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.basis");
    fs::write(&good, "algebra S_(4,418)\nstatus fb\nsource dual-of S_(4,428)\n").unwrap();
    let o = aisr(&["verify", good.to_str().unwrap(), "--vars", "2", "--word-len", "2", "--summands", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let bad = dir.path().join("bad.basis");
    fs::write(&bad, "algebra S_(4,401)\nstatus fb\nsource printed-basis\nx ≈\n").unwrap();
    assert_eq!(code(&aisr(&["verify", bad.to_str().unwrap()])), 3);

    let wrong = dir.path().join("wrong.basis");
    fs::write(&wrong, "algebra S_(4,428)\nstatus fb\nsource printed-basis\nx + yxz ≈ y + yxz + yx\n").unwrap();
    let o = aisr(&["verify", wrong.to_str().unwrap(), "--vars", "2", "--word-len", "2", "--summands", "2"]);
    assert_eq!(code(&o), 5, "{}", stdout(&o));
}

#[test]
fn validate_rejects_broken_table() {
    let dir = tempfile::tempdir().unwrap();
    let ok = aisr(&["--format", "record", "catalog", "show", "L_2"]);
    assert_eq!(code(&ok), 0);
    let f = dir.path().join("missing.alg");
    assert_eq!(code(&aisr(&["validate", f.to_str().unwrap()])), 2);
    assert_eq!(code(&aisr(&["validate", "--all"])), 0);

    // 2·2 = 1 breaks distributivity over the diamond addition
    let broken = dir.path().join("broken.alg");
    fs::write(
        &broken,
        "order 4\nadd:\n1 1 1 1\n1 2 3 4\n1 3 3 1\n1 4 1 4\nmul:\n1 1 1 1\n1 1 3 4\n1 1 1 1\n1 4 1 1\n",
    )
    .unwrap();
    let o = aisr(&["validate", broken.to_str().unwrap()]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
}
