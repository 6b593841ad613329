//! Exit codes and document shape for each subcommand.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pattern(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../patterns")
        .join(format!("{name}.dg"))
        .to_string_lossy()
        .into_owned()
}

fn dicon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dicon")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn doc(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn successful_commands_exit_zero_with_a_manifest() {
    let c3 = pattern("c3");
    let runs: Vec<Vec<&str>> = vec![
        vec!["density", "--pattern", &c3],
        vec!["condition-a", "--pattern", &c3, "--a", "log2(3)"],
        vec!["ex", "--pattern", &c3, "--n", "4", "--a", "3/2"],
        vec!["count-free", "--pattern", &c3, "--n", "4", "--method", "orbits"],
        vec!["ratio", "--pattern", &c3, "--n", "3"],
        vec!["supersat", "--pattern", &c3, "--n", "4", "--k-max", "2"],
        vec!["hypergraph", "--pattern", &c3, "--N", "5"],
        vec!["codegree", "--pattern", &c3, "--N", "5", "--tau", "0.5", "--normalization", "maximum"],
        vec!["verify-lemma", "--pattern", &c3, "--N-range", "4,6"],
        vec!["containers", "--pattern", &c3, "--N", "4", "--eps", "1/10"],
        vec!["pipeline", "--pattern", &c3, "--a", "2", "--N", "4", "--eps", "1/10"],
    ];
    for args in runs {
        let out = dicon(&args);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let d = doc(&out);
        assert_eq!(d["manifest"]["command"], args[0]);
        assert_eq!(d["manifest"]["tool"], "dicon");
        for key in ["inputs", "results"] {
            assert!(d.get(key).is_some(), "{args:?} lacks {key}");
        }
    }
}

#[test]
fn usage_and_input_errors_exit_one() {
    assert_eq!(code(&dicon(&["no-such-command"])), 1);
    assert_eq!(code(&dicon(&["density"])), 1);
    assert_eq!(code(&dicon(&["density", "--pattern", "/nonexistent.dg"])), 1);
    let c3 = pattern("c3");
    assert_eq!(code(&dicon(&["condition-a", "--pattern", &c3, "--a", "zero"])), 1);
    assert_eq!(code(&dicon(&["containers", "--pattern", &c3, "--N", "4", "--eps", "3/4"])), 1);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dg");
    std::fs::write(&bad, "n=3\n0 1\n0 1\n").unwrap();
    let out = dicon(&["density", "--pattern", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(code(&dicon(&["--help"])), 0);
    assert_eq!(code(&dicon(&["--version"])), 0);
}

#[test]
fn refusals_exit_two_with_a_document() {
    let dk3 = pattern("dk3");
    let out = dicon(&["pipeline", "--pattern", &dk3, "--a", "2", "--N", "5", "--eps", "1/10"]);
    assert_eq!(code(&out), 2);
    let d = doc(&out);
    assert_eq!(d["error"]["kind"], "condition-a-refusal");
    assert!(String::from_utf8_lossy(&out.stderr).contains("6/3 > 2/2"));

    let out = dicon(&["pipeline", "--pattern", &dk3, "--a", "4", "--N", "5", "--eps", "1/10"]);
    assert_eq!(code(&out), 2);
    assert_eq!(doc(&out)["error"]["kind"], "infinite-density-refusal");

    let c3 = pattern("c3");
    // Beyond the labelled enumeration limit.
    assert_eq!(code(&dicon(&["ex", "--pattern", &c3, "--n", "6", "--mode", "full"])), 2);
    assert_eq!(code(&dicon(&["verify-lemma", "--pattern", &pattern("two_cycle"), "--N-range", "4..5"])), 2);
}

#[test]
fn verification_failures_exit_three() {
    let c3 = pattern("c3");
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("fam.txt");
    let f = fam.to_str().unwrap();
    let out = dicon(&["containers", "--pattern", &c3, "--N", "4", "--eps", "1/10", "--export", f]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&dicon(&["verify-family", "--pattern", &c3, "--family", f])), 0);
    // The family was built for C3; checked against T3 it misses sets.
    let out = dicon(&["verify-family", "--pattern", &pattern("t3"), "--family", f]);
    assert_eq!(code(&out), 3);
    assert!(doc(&out)["results"]["miss"]["witness"].is_string());
}

#[test]
fn out_flag_writes_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("r.json");
    let out = dicon(&["density", "--pattern", &pattern("t3"), "--out", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let d: Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(d["results"]["m"]["value"], "2/1");
}
