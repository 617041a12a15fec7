//! End-to-end checks of the CLI binary: exit-code contract, report
//! determinism on the shipped reference config, and the full-run time
//! budget.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::Instant;

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_gerbytorus")
}

fn reference_config() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs/reference.json")
        .canonicalize()
        .expect("reference config is shipped with the repository")
}

fn run(args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .output()
        .expect("binary runs")
}

/// Criterion 9: `verify all` on the shipped reference config exits 0 within
/// the time budget and produces byte-identical stdout across two runs with
/// the same seed.
#[test]
fn acceptance_9_full_verify_deterministic() {
    let config = reference_config();
    let config = config.to_str().unwrap();
    let started = Instant::now();
    let first = run(&["--config", config, "verify", "all"]);
    let second = run(&["--config", config, "verify", "all"]);
    let elapsed = started.elapsed().as_secs_f64();

    assert!(
        first.status.success(),
        "exit {:?}\n{}",
        first.status.code(),
        String::from_utf8_lossy(&first.stdout)
    );
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(
        first.stdout, second.stdout,
        "reports differ between identical runs"
    );
    assert!(elapsed <= 60.0, "two runs took {elapsed:.1}s (limit 60s)");

    // JSON mode is deterministic too.
    let json_a = run(&["--config", config, "--json", "verify", "all"]);
    let json_b = run(&["--config", config, "--json", "verify", "all"]);
    assert_eq!(json_a.stdout, json_b.stdout);
    assert!(json_a.status.success());

    println!(
        "ACCEPTANCE 9: PASS — byte-identical `verify all` twice in {elapsed:.1}s, exit code 0"
    );
}

#[test]
fn exit_code_2_on_config_error() {
    let out = run(&["--config", "/nonexistent/config.json", "verify", "all"]);
    assert_eq!(out.status.code(), Some(2));

    // Invalid torus: named invariant in the error.
    let bad = r#"{"n": 1, "T": {"re": [["0"]], "im": [["-1"]]}}"#;
    let mut child = Command::new(binary())
        .args(["--config", "-", "verify", "gcs"])
        .stdin(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(bad.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("positive definite"), "stderr: {stderr}");
}

#[test]
fn exit_code_2_on_unknown_suite() {
    let config = reference_config();
    let out = run(&["--config", config.to_str().unwrap(), "verify", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn individual_suites_pass() {
    let config = reference_config();
    let config = config.to_str().unwrap();
    for suite in ["gcs", "gerbe", "objects", "dhym"] {
        let out = run(&["--config", config, "verify", suite]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "suite {suite}:\n{}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn mirror_command_reports_data() {
    let config = reference_config();
    let out = run(&["--config", config.to_str().unwrap(), "mirror"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("mirror period matrix"));
    assert!(stdout.contains("consistent with twisted blocks: true"));

    let json = run(&["--config", config.to_str().unwrap(), "--json", "mirror"]);
    let parsed: serde_json::Value = serde_json::from_slice(&json.stdout).expect("valid JSON");
    assert!(parsed.get("omega_mat").is_some());
    assert!(parsed.get("twisted_mirror_period_matrix").is_some());
}

#[test]
fn report_command_includes_config_echo() {
    let config = reference_config();
    let out = run(&["--config", config.to_str().unwrap(), "report"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("configuration:"));
    assert!(stdout.contains("overall: PASS"));
}

#[test]
fn tolerance_overrides_are_accepted() {
    let config = reference_config();
    let out = run(&[
        "--config",
        config.to_str().unwrap(),
        "--tol-abs",
        "1e-8",
        "--tol-phase",
        "1e-7",
        "verify",
        "gcs",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn seed_override_changes_randomized_draws_only() {
    let config = reference_config();
    let config = config.to_str().unwrap();
    let a = run(&["--config", config, "--seed", "7", "verify", "gcs"]);
    let b = run(&["--config", config, "--seed", "7", "verify", "gcs"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.status.success());
}
