//! End-to-end runs of the binary: verdicts never fail the process, output
//! is byte-deterministic for a fixed invocation.

use std::process::{Command, Output};

fn treeset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treeset"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = treeset(args);
    assert!(
        out.status.success(),
        "expected success, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn classify_fibonacci_reports_tree() {
    let out = stdout(&["classify", "--source", "fibonacci", "--horizon", "20"]);
    assert!(out.contains("acyclic=true connected=true tree=true"));
    assert!(out.contains("neutral"));
    assert!(out.contains("verified up to horizon 20"));
}

#[test]
fn classify_json_has_the_schema_fields() {
    let out = stdout(&[
        "classify",
        "--source",
        "chacon",
        "--horizon",
        "16",
        "--format",
        "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["neutrality"], "mixed");
    assert_eq!(doc["classification"]["acyclic"], false);
    assert_eq!(doc["complexity"]["identities_hold"], true);
    assert_eq!(doc["horizon"], 16);
}

#[test]
fn verify_return_on_fibonacci() {
    let out = stdout(&[
        "verify", "return", "--source", "fibonacci", "--horizon", "25", "--word", "aa",
        "--format", "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["theorem"], "return-basis");
    assert!(doc["verdict"].as_str().unwrap().contains("basis=true"));
    assert_eq!(doc["witnesses"][0], "baa");
    assert_eq!(doc["witnesses"][1], "babaa");
}

#[test]
fn verify_freeness_exits_zero_on_a_negative_verdict() {
    let out = treeset(&["verify", "freeness", "--code-inline", "2231,31,231"]);
    assert!(out.status.success(), "verdicts are not process failures");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("free=false rank=2"));
}

#[test]
fn verify_saturation_on_cassaigne_acyclic() {
    let out = stdout(&[
        "verify",
        "saturation",
        "--source",
        "cassaigne-acyclic",
        "--horizon",
        "20",
        "--code-block",
        "2",
        "--bound",
        "6",
    ]);
    assert!(out.contains("saturated=true"));
}

#[test]
fn export_rauzy_is_deterministic() {
    let args = ["export", "rauzy", "--source", "fibonacci", "--horizon", "20", "--order", "7"];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b);
    assert_eq!(a.matches(" -> ").count(), 9);
    assert!(a.contains("digraph"));
}

#[test]
fn export_coset_counts_three_states() {
    let out = stdout(&[
        "export",
        "coset",
        "--source",
        "fibonacci",
        "--horizon",
        "25",
        "--code-inline",
        "a,baab,babaabab,babaabaabab",
        "--format",
        "dot",
    ]);
    assert_eq!(out.matches("shape=").count(), 3);
    assert!(out.contains("doublecircle"));
}

#[test]
fn word_list_sources_warn_about_extendability() {
    let dir = std::env::temp_dir().join("treeset-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("finite.txt");
    std::fs::write(&path, "vvu\n# a comment\n").unwrap();
    let out = stdout(&["classify", "--words", path.to_str().unwrap(), "--horizon", "6"]);
    assert!(out.contains("not biextendable"));
}

#[test]
fn missing_parameters_are_process_errors() {
    let out = treeset(&["verify", "return", "--source", "fibonacci"]);
    assert!(!out.status.success());
    let out = treeset(&["classify"]);
    assert!(!out.status.success());
    let out = treeset(&["export", "rauzy", "--source", "fibonacci"]);
    assert!(!out.status.success());
}

#[test]
fn out_flag_writes_the_file() {
    let dir = std::env::temp_dir().join("treeset-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g7.dot");
    stdout(&[
        "export", "rauzy", "--source", "fibonacci", "--horizon", "20", "--order", "3",
        "--out", path.to_str().unwrap(),
    ]);
    let content = std::fs::read_to_string(&path).unwrap();
    assert!(content.starts_with("digraph"));
}
