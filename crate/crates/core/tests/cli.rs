use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

const ETA: &str = "|0000>+|0001>+|0101>+|1010>+|1011>+|1111>\n";
const PSI6: &str = "# five qubits\nqubits: 5\nsqrt(6)/4|11111> + sqrt(2)/4|10000> + sqrt(2)/4|01000>\n  + sqrt(2)/4|00100> + sqrt(2)/4|00010> + sqrt(2)/4|00001>\n";

fn entgate(args: &[&str], stdin: &str) -> Output {
    entgate_env(args, stdin, None)
}

fn entgate_env(args: &[&str], stdin: &str, cap: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_entgate"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    cmd.env_remove("ENTGATE_ORACLE_CAP");
    if let Some(cap) = cap {
        cmd.env("ENTGATE_ORACLE_CAP", cap);
    }
    let mut child = cmd.spawn().expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("entgate-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn psi6_file_is_entangled() {
    let dir = scratch("psi6");
    let path = dir.join("psi6.state");
    fs::write(&path, PSI6).unwrap();
    let out = entgate(&["classify", path.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["kind"], "GenuinelyEntangled");
    assert_eq!(v["reason"], "NoPairStructure");
    assert_eq!(v["n"], 5);
    assert_eq!(v["m"], 6);
}

#[test]
fn eta_prints_witness() {
    let out = entgate(&["classify", "--format", "text"], ETA);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: Separable"), "{text}");
    assert!(
        text.contains("witness: (|00>+|11>){1,3} x (|00>+|01>+|11>){2,4}"),
        "{text}"
    );
}

#[test]
fn malformed_input_exits_64() {
    let out = entgate(&["classify", "-"], "|01");
    assert_eq!(out.status.code(), Some(64));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("1:4"), "{err}");
    assert!(entgate(&["classify", "/nonexistent/file.state"], "").status.code() == Some(64));
}

#[test]
fn oracle_command_and_cap() {
    let uniform = "|000>+|001>+|010>+|011>+|100>+|101>+|110>+|111>";
    let out = entgate(&["oracle"], uniform);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["method"], "Oracle");

    let ghz = "|0000>+|1111>";
    assert_eq!(entgate_env(&["classify"], ghz, Some("3")).status.code(), Some(2));
    assert_eq!(
        entgate_env(&["classify", "--oracle-cap", "4"], ghz, Some("3"))
            .status
            .code(),
        Some(1)
    );
    let forced = entgate(&["classify", "--force-oracle"], ETA);
    assert_eq!(json(&forced)["method"], "Oracle");
    assert_eq!(json(&forced)["kind"], "Separable");
}

#[test]
fn explain_reports_minors_and_forms() {
    let theta = "|0000>+|0010>+|0101>+|0111>+|1010>-|1111>";
    let out = entgate(&["explain"], theta);
    assert_eq!(out.status.code(), Some(1));
    let e = json(&out);
    assert_eq!(e["structures"][0]["p"], serde_json::json!([2, 4]));
    assert_eq!(e["structures"][0]["minors"][1]["value"], "-2");
    assert_eq!(e["canonical_forms"].as_array().unwrap().len(), 4);
    assert_eq!(e["verdict"]["reason"], "NoRank1Structure");
}

#[test]
fn gen_is_deterministic_and_classifies() {
    let a = entgate(
        &["gen", "--kind", "separable", "--n", "6", "--m", "6", "--seed", "7"],
        "",
    );
    let b = entgate(
        &["gen", "--kind", "separable", "--n", "6", "--m", "6", "--seed", "7"],
        "",
    );
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc = String::from_utf8(a.stdout).unwrap();
    assert!(doc.starts_with("qubits: 6\n"));
    assert_eq!(entgate(&["classify"], &doc).status.code(), Some(0));
    assert_eq!(entgate(&["oracle"], &doc).status.code(), Some(0));

    let pairs = entgate(&["gen", "--kind", "complete-pairs", "--n", "4", "--seed", "1"], "");
    let doc = String::from_utf8(pairs.stdout).unwrap();
    assert_eq!(entgate(&["classify"], &doc).status.code(), Some(1));
    assert_eq!(entgate(&["oracle"], &doc).status.code(), Some(1));

    let bad = entgate(&["gen", "--kind", "separable", "--n", "2", "--m", "6"], "");
    assert_eq!(bad.status.code(), Some(64));
    assert!(String::from_utf8(bad.stderr).unwrap().contains("infeasible"));
}

#[test]
fn selftest_passes_in_both_formats() {
    let out = entgate(&["selftest", "--format", "text"], "");
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("15 fixtures, 0 failed"));
    let out = entgate(&["selftest", "--format", "json"], "");
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["passed"], true);
    assert_eq!(report["results"].as_array().unwrap().len(), 15);
}

#[test]
fn batch_directory() {
    let dir = scratch("batch");
    fs::write(dir.join("a_eta.state"), ETA).unwrap();
    fs::write(dir.join("b_psi6.state"), PSI6).unwrap();
    let out = entgate(&["classify", dir.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(1));
    let docs = json(&out);
    let kinds: Vec<&str> = docs
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["result"]["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["Separable", "GenuinelyEntangled"]);

    fs::write(dir.join("c_bad.state"), "|01").unwrap();
    assert_eq!(
        entgate(&["classify", dir.to_str().unwrap()], "").status.code(),
        Some(64)
    );
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = entgate(&["explain"], PSI6);
    let b = entgate(&["explain"], PSI6);
    assert_eq!(a.stdout, b.stdout);
}
