//! Exit codes and JSON shape of the command-line front end.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Output) {
    let out = Command::new(env!("CARGO_BIN_EXE_goppa-cyclic"))
        .args(args)
        .output()
        .unwrap();
    (out.status.code().unwrap(), out)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn reproduce_exits_zero_with_json() {
    let (code, out) = run(&["reproduce", "--example", "3.13", "--json"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["pass"], true);
    let cases = v["cases"].as_array().unwrap();
    assert!(cases
        .iter()
        .all(|c| c["n"] == 9 && c["k"] == 2 && c["d"] == 6 && c["match"] == true));
}

#[test]
fn singular_matrix_is_a_usage_error() {
    let (code, out) = run(&[
        "spectral",
        "--field",
        "m=4",
        "--matrix",
        "[[1,1],[1,1]]",
        "--json",
    ]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["error"]["kind"], "singular");
}

#[test]
fn order_two_and_upper_triangular_maps_are_skips() {
    let (code, out) = run(&[
        "spectral",
        "--field",
        "m=4",
        "--matrix",
        "[[g,1],[1,g]]",
        "--json",
    ]);
    assert_eq!(code, 3);
    assert_eq!(json(&out)["error"]["kind"], "order_two");
    let (code, _) = run(&["verify", "--field", "m=4", "--matrix", "[[1,1],[0,1]]"]);
    assert_eq!(code, 3);
}

#[test]
fn unknown_flags_and_examples_are_rejected() {
    assert_eq!(run(&["sweep", "--bogus"]).0, 2);
    let (code, out) = run(&["reproduce", "--example", "9.9", "--json"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["error"]["kind"], "invalid_argument");
}

#[test]
fn zero_code_reports_warning() {
    let (code, out) = run(&[
        "code",
        "--field",
        "m=6,poly=0x5b",
        "--matrix",
        "[[g^7,0],[1,g^-7]]",
        "--s",
        "5",
        "--t",
        "3",
        "--json",
    ]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["k"], 0);
    assert!(!v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn verify_text_and_json_agree() {
    let args = [
        "verify",
        "--field",
        "m=6",
        "--matrix",
        "[[g^5,g^43],[g^13,g^59]]",
        "--s",
        "3",
        "--support",
        "orbit-of:g",
    ];
    let (code, text) = run(&args);
    assert_eq!(code, 0);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.starts_with("[21, 11, 6]"));
    let mut with_json = args.to_vec();
    with_json.push("--json");
    let v = json(&run(&with_json).1);
    assert_eq!(
        (v["n"].as_u64(), v["k"].as_u64(), v["d"].as_u64()),
        (Some(21), Some(11), Some(6))
    );
    assert_eq!(v["generator_hex"], v["predicted_generator_hex"]);
}

#[test]
fn extended_code_needs_orbit_of_infinity() {
    let base = [
        "verify",
        "--field",
        "m=6",
        "--matrix",
        "[[g^5,g^43],[g^13,g^59]]",
        "--variant",
        "extended",
    ];
    assert_eq!(
        run(&[&base[..], &["--support", "orbit-infty"]].concat()).0,
        0
    );
    assert_eq!(
        run(&[&base[..], &["--support", "orbit-of:g"]].concat()).0,
        2
    );
}

#[test]
fn orbit_and_field_commands() {
    let (code, out) = run(&[
        "orbit",
        "--field",
        "m=6",
        "--matrix",
        "[[g^7,0],[1,g^-7]]",
        "--json",
    ]);
    assert_eq!(code, 0);
    let orbits = json(&out)["orbits"].as_array().unwrap().len();
    assert_eq!(orbits, 2 + 63 / 9);
    let (code, out) = run(&["field", "--field", "m=8", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["poly"], "0x11d");
    assert_eq!(run(&["field", "--field", "m=4,poly=0x15"]).0, 2);
}

#[test]
fn sweep_writes_to_file() {
    let dir = std::env::temp_dir().join(format!("goppa-cyclic-sweep-{}.json", std::process::id()));
    let path = dir.to_str().unwrap();
    let (code, _) = run(&[
        "sweep", "--count", "20", "--seed", "5", "--json", "--out", path,
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&dir).unwrap()).unwrap();
    std::fs::remove_file(&dir).ok();
    let total = v["passed"].as_u64().unwrap()
        + v["failed"].as_u64().unwrap()
        + v["skipped"].as_u64().unwrap();
    assert_eq!(total, 20);
}
