//! End-to-end runs of the binary: exit codes and output shape.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgexcess")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn generated(name: &str, args: &[&str]) -> PathBuf {
    let o = run(&[&["generate"], args].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    write(name, &stdout(&o))
}

fn check(property: &str, file: &Path) -> i32 {
    run(&["check", property, file.to_str().unwrap()]).status.code().unwrap()
}

const PATH3: &str = "3 4\n0 1\n1 0\n1 2\n2 1\n";

#[test]
fn check_exit_codes() {
    let petersen = generated("petersen.txt", &["petersen"]);
    let path3 = write("path3.txt", PATH3);
    let chord = write("chord.txt", "4 5\n0 1\n1 2\n2 3\n3 0\n0 2\n");
    let disconnected = write("arc.txt", "2 1\n0 1\n");
    assert_eq!(check("dr", &petersen), 0);
    assert_eq!(check("geodetic-dr", &petersen), 0);
    assert_eq!(check("dr", &path3), 1);
    assert_eq!(check("bipartite", &path3), 0);
    assert_eq!(check("regular", &path3), 1);
    assert_eq!(check("normal", &chord), 1);
    assert_eq!(check("trichotomy", &chord), 2);
    assert_eq!(check("dr", &disconnected), 1);
    assert_eq!(check("trichotomy", &disconnected), 2);
}

#[test]
fn malformed_input_reports_the_line() {
    let bad = write("loop.txt", "3 2\n0 1\n2 2\n");
    let o = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn adjacency_matrix_input() {
    let path3 = write("path3.adj", "3\n0 1 0\n1 0 1\n0 1 0\n");
    let o = run(&["check", "wdr", path3.to_str().unwrap(), "--format", "adjmatrix"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn analyze_json_carries_exact_excesses() {
    let path3 = write("path3-json.txt", PATH3);
    let o = run(&["analyze", path3.to_str().unwrap(), "--json"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["excess"]["simple_excess"], "2/3");
    assert_eq!(report["excess"]["spectral_excess"], "8/9");
    assert_eq!(report["verdicts"]["dr"]["decision"], false);
    assert_eq!(report["input"]["n"], 3);
}

#[test]
fn analyze_text_states_the_comparison() {
    let path3 = write("path3-text.txt", PATH3);
    let text = stdout(&run(&["analyze", path3.to_str().unwrap()]));
    assert!(text.contains("simple excess 2/3 < spectral excess 8/9"), "{text}");
}

#[test]
fn generate_lifted_cycle() {
    let o = run(&["generate", "directed_cycle", "3", "--lift", "2"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("6 12"));
    let lifted = write("lift.txt", &text);
    assert_eq!(check("dr", &lifted), 0);
}

#[test]
fn generate_rejects_bad_parameters() {
    assert_eq!(run(&["generate", "paley_tournament", "13"]).status.code(), Some(2));
    assert_eq!(run(&["generate", "no_such_family"]).status.code(), Some(2));
}

#[test]
fn verify_small_orders() {
    let o = run(&["verify", "--max-n", "3", "--jobs", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("PASS projection-bounds")), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
    assert_eq!(run(&["verify", "--max-n", "6"]).status.code(), Some(2));
}
