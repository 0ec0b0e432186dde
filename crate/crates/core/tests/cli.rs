use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anyon-chronos")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["model", "show"], 0),
        (&["--model", "ising", "model", "show"], 0),
        (&["braid", "eval", "--word", "s1 S2"], 0),
        (&["fuse", "--state", "-i", "--pair", "1,3"], 0),
        (&["resolution", "--gates", "universal", "--ancilla", "3"], 0),
        (&["bogus"], 2),
        (&["braid", "closure", "--anyons"], 2),
        (&["--model", "fibonacci", "model", "show"], 2),
        (&["fuse", "--state", "2", "--pair", "1,2"], 2),
        (&["fuse", "--state", "0", "--pair", "12"], 2),
        (&["fuse", "--pair", "1,2"], 2),
        (&["paw", "run", "--resource", "singlet"], 2),
        (&["resolution", "--gates", "magic", "--ancilla", "1"], 2),
        (&["braid", "eval", "--word", "s3"], 1),
        (&["braid", "closure", "--anyons", "4"], 1),
        (&["braid", "closure", "--anyons", "6", "--max-size", "100"], 1),
        (&["fuse", "--anyons", "6", "--resource", "singlet", "--pair", "2,5"], 1),
        (&["fuse", "--state", "0", "--pair", "1,4"], 1),
        (&["povm", "enumerate", "--ancilla", "3"], 1),
        (&["paw", "run", "--resource", "singlet", "--ticks", "1"], 1),
        (&["paw", "run", "--resource", "singlet", "--povm-file", "/nonexistent/effects.json"], 1),
    ];
    for (args, code) in cases {
        assert_eq!(run(args).status.code(), Some(*code), "{args:?}");
    }
}

#[test]
fn help_exits_cleanly() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("resolution"));
}

#[test]
fn report_envelope() {
    let r = json(&["braid", "closure", "--anyons", "6"]);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["report"], "braid_closure");
    assert_eq!(r["group_order"], 11520);
    let text = String::from_utf8(run(&["model", "show"]).stdout).unwrap();
    assert!(text.contains("7.07106781187e-1"));
}

#[test]
fn clifford_resolution_does_not_improve_with_ancillas() {
    let one = json(&["resolution", "--gates", "clifford", "--ancilla", "1"]);
    let two = json(&["resolution", "--gates", "clifford", "--ancilla", "2"]);
    assert_eq!(one["delta_tau"], two["delta_tau"]);
    assert_eq!(one["equatorial_ticks"], 4);
}

#[test]
fn paw_run_with_povm_file() {
    let dir = tempfile::tempdir().unwrap();
    // covariant four-tick POVM listed out of order
    let effects = serde_json::json!({"effects": [
        {"outcome": "b", "matrix": [[[0.25, 0.0], [0.0, 0.25]], [[0.0, -0.25], [0.25, 0.0]]]},
        {"outcome": "a", "matrix": [[[0.25, 0.0], [0.25, 0.0]], [[0.25, 0.0], [0.25, 0.0]]]},
        {"outcome": "d", "matrix": [[[0.25, 0.0], [0.0, -0.25]], [[0.0, 0.25], [0.25, 0.0]]]},
        {"outcome": "c", "matrix": [[[0.25, 0.0], [-0.25, 0.0]], [[-0.25, 0.0], [0.25, 0.0]]]}
    ]});
    let path = dir.path().join("effects.json");
    std::fs::write(&path, effects.to_string()).unwrap();
    let r = json(&["paw", "run", "--resource", "singlet", "--povm-file", path.to_str().unwrap()]);
    assert_eq!(r["n_ticks"], 4);
    assert_eq!(r["stationary"], true);
    assert_eq!(r["emergent_evolution"], true);
    assert_eq!(r["ticks"][0]["angle"].to_string(), "0.00000000000e+0");
    assert_eq!(r["ticks"][1]["angle"].to_string(), "1.57079632679e+0");

    let incomplete = dir.path().join("bad.json");
    std::fs::write(&incomplete, r#"[{"outcome": "0", "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}]"#).unwrap();
    assert_eq!(run(&["paw", "run", "--resource", "singlet", "--povm-file", incomplete.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn output_file_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = run(&["fuse", "--state", "+", "--pair", "2,3", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("path,value\n"));
    assert!(text.contains("outcomes[0].probability,1.00000000000e+0"));
}

#[test]
fn braided_resource_reports_local_map() {
    let r = json(&["paw", "run", "--resource", "braided", "--ticks", "4"]);
    assert!(r["local_map_from_singlet"].is_array());
    assert_eq!(r["stationary"], true);
    assert_eq!(r["uniform_probabilities"], true);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["paw", "run", "--resource", "singlet", "--ticks", "16"][..],
        &["povm", "enumerate", "--ancilla", "2", "--ancilla-prep", "stabilizer"][..],
        &["--model", "ising", "braid", "eval", "--anyons", "6", "--word", "s1 s2 s3 s4 s5"][..],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}
