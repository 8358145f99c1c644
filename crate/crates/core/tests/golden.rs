//! Example reports must stay byte-stable against the checked-in JSON.

use std::path::PathBuf;

use goppa_cyclic::harness::{reproduce_example, EXAMPLE_IDS};

fn golden_path(id: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("golden/example-{id}.json"))
}

#[test]
fn example_reports_match_golden_files() {
    for id in EXAMPLE_IDS {
        let report = reproduce_example(id).unwrap();
        assert!(report.pass, "{id} failed its own checks");
        let got = serde_json::to_value(&report).unwrap();
        let want: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(golden_path(id)).unwrap()).unwrap();
        assert_eq!(got, want, "report for {id} drifted from its golden file");
    }
}

#[test]
fn reports_are_deterministic() {
    let a = serde_json::to_string(&reproduce_example("3.24").unwrap()).unwrap();
    let b = serde_json::to_string(&reproduce_example("3.24").unwrap()).unwrap();
    assert_eq!(a, b);
}
