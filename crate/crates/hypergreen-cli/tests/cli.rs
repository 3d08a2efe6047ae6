//! End-to-end checks of the command-line contract: exit codes and
//! output formats.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypergreen"))
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn missing_config_exits_2() {
    let out = bin()
        .args(["eval-fa", "--config", "/definitely/not/here.toml"])
        .output()
        .expect("spawn");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = std::env::temp_dir().join("hypergreen-cli-tests");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("typo.toml");
    std::fs::write(&path, "[params]\nm = 2\nn = 1\nalpha = [0.25]\nbogus = 3\n").expect("write");
    let out = bin()
        .args(["eval-q", "--config", path.to_str().unwrap()])
        .output()
        .expect("spawn");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_format_exits_2() {
    let out = bin()
        .args(["eval-fa", "--config", &data("eval.toml"), "--format", "xml"])
        .output()
        .expect("spawn");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_convergence_exits_1() {
    let dir = std::env::temp_dir().join("hypergreen-cli-tests");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("deep.toml");
    std::fs::write(
        &path,
        "[[eval_fa]]\na = 1.1\nb = [0.25, 0.3]\nc = [0.5, 0.6]\nz = [-80.0, -80.0]\n",
    )
    .expect("write");
    let out = bin()
        .args(["eval-fa", "--config", path.to_str().unwrap()])
        .output()
        .expect("spawn");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn eval_fa_csv_has_17_significant_digits() {
    let out = bin()
        .args(["eval-fa", "--config", &data("eval.toml")])
        .output()
        .expect("spawn");
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).expect("utf8");
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "a,b,c,z,rel_tol,value,abs_error_estimate,terms_used,converged"
    );
    let first = lines.next().unwrap();
    let value = first.split(',').nth(5).unwrap();
    // 1 leading digit + 16 fractional digits in scientific notation.
    let mantissa = value.split('e').next().unwrap();
    assert_eq!(mantissa.split('.').nth(1).unwrap().len(), 16, "{value}");
}

#[test]
fn rel_tol_override_is_reflected_in_output() {
    let loose = bin()
        .args(["eval-fa", "--config", &data("eval.toml"), "--rel-tol", "1e-6"])
        .output()
        .expect("spawn");
    assert_eq!(loose.status.code(), Some(0));
    let text = String::from_utf8(loose.stdout).expect("utf8");
    assert!(text.contains("9.9999999999999995e-7"), "{text}");
}

#[test]
fn verify_unknown_suite_exits_2() {
    let out = bin()
        .args(["verify", "--suite", "nonsense"])
        .output()
        .expect("spawn");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_domain_suite_passes() {
    let out = bin()
        .args(["verify", "--suite", "domain", "--seed", "5"])
        .output()
        .expect("spawn");
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).expect("utf8");
    assert!(text.contains("result: ALL PASS"), "{text}");
}
