//! Acceptance criterion 9: the verification report is byte-identical
//! across runs with the same seed.

use std::process::Command;
use std::time::Instant;

fn run_verify() -> (Vec<u8>, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_kring"))
        .args(["verify", "all", "--type", "A1", "--seed", "0"])
        .output()
        .expect("binary runs");
    (out.stdout, out.status.success())
}

#[test]
fn criterion_9_deterministic_reports() {
    let start = Instant::now();
    let (first, ok1) = run_verify();
    let (second, ok2) = run_verify();
    let pass = ok1 && ok2 && first == second && !first.is_empty();
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!(
        "{verdict} criterion 9: byte-identical verify reports ({:?})",
        start.elapsed()
    );
    assert!(pass);
}
