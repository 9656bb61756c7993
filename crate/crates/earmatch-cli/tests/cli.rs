use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use earmatch_cli::format;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_earmatch")).args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

const SQUARE: &str = "bip 2 2\n0 0\n0 1\n1 0\n1 1\n";

#[test]
fn check_separates_the_three_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let square = write(dir.path(), "square.bip", SQUARE);
    let output = run(&["check", square.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("matching covered: yes"), "{text}");
    assert!(text.contains("minimal: yes"), "{text}");

    let path = write(dir.path(), "path.bip", "bip 2 2\n0 0\n1 0\n1 1\n");
    let output = run(&["check", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout(&output).contains("matching covered: no"));

    let bad = write(dir.path(), "bad.bip", "bip 2 2\n0 7\n");
    let output = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("line 2"));
}

#[test]
fn the_smallest_shared_member_classifies_into_all_five_classes() {
    let dir = tempfile::tempdir().unwrap();
    let theta = dir.path().join("theta.bip");
    let output = run(&["construct", "leafmatch", "--tree", "star 3", "-o", theta.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));

    let output = run(&["classify", theta.to_str().unwrap(), "--json"]);
    assert_eq!(output.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["schema"], 1);
    for class in ["h0", "h1", "h2", "h3", "h4"] {
        assert_eq!(doc["report"]["flags"][class], true, "{class}");
    }
    for check in doc["bounds"]["checks"].as_array().unwrap() {
        assert_eq!(check["slack"], 0, "{check}");
    }

    let output = run(&["recognize", theta.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output).matches(": yes").count(), 5);

    let output = run(&["ears", theta.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("ears: 1"));
}

#[test]
fn classify_rejects_graphs_outside_its_domain() {
    let dir = tempfile::tempdir().unwrap();
    let star = write(dir.path(), "star.bip", "bip 1 3\n0 0\n0 1\n0 2\n");
    let output = run(&["classify", star.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout(&output).contains("not classifiable"));

    let recognize = run(&["recognize", star.to_str().unwrap()]);
    assert_eq!(recognize.status.code(), Some(1));
    assert_eq!(stdout(&recognize).matches(": no").count(), 5);
}

#[test]
fn retract_leaves_a_fixed_point_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let theta = dir.path().join("theta.bip");
    run(&["construct", "leafmatch", "--tree", "star 3", "-o", theta.to_str().unwrap()]);
    let output = run(&["retract", theta.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output), fs::read_to_string(&theta).unwrap());
}

#[test]
fn extendability_reports_witnesses_both_ways() {
    let dir = tempfile::tempdir().unwrap();
    let j24 = dir.path().join("j24.bip");
    let output = run(&["construct", "J", "2", "4", "-o", j24.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let output = run(&["kext", j24.to_str().unwrap(), "-k", "2", "--bounds"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("2-extendable: yes"), "{text}");
    assert!(text.contains("minimal: yes"), "{text}");
    assert!(text.contains("size-cap-strong"), "{text}");
    assert_eq!(text.matches("tight").count(), 4, "{text}");

    let hexagon = write(dir.path(), "hexagon.bip", "bip 3 3\n0 0\n1 0\n1 1\n2 1\n2 2\n0 2\n");
    let output = run(&["kext", hexagon.to_str().unwrap(), "-k", "2"]);
    assert_eq!(output.status.code(), Some(1));
    let text = stdout(&output);
    assert!(text.contains("2-extendable: no"), "{text}");
    assert!(text.contains("violator: S = {"), "{text}");
}

#[test]
fn dot_export_reimports_as_the_same_structure() {
    let dir = tempfile::tempdir().unwrap();
    let square = write(dir.path(), "square.bip", SQUARE);
    let dot = dir.path().join("square.dot");
    let output =
        run(&["check", square.to_str().unwrap(), "--dot", dot.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let exported = fs::read_to_string(&dot).unwrap();
    let reimported = format::parse_dot(&exported).unwrap();
    let original = format::parse_graph(SQUARE).unwrap();
    assert_eq!(reimported.a_count(), original.a_count());
    assert_eq!(reimported.b_count(), original.b_count());
    let mut got = reimported.edges().to_vec();
    let mut want = original.edges().to_vec();
    got.sort_unstable();
    want.sort_unstable();
    assert_eq!(got, want);
}

#[test]
fn census_writes_records_and_a_versioned_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("census");
    let output =
        run(&["census", "--max-n", "6", "--k", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(summary["schema"], 1);
    assert_eq!(summary["records"], 7);
    assert_eq!(summary["violations"].as_array().unwrap().len(), 0);
    let written: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(written, summary);
    let lines: Vec<serde_json::Value> = fs::read_to_string(out.join("records.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 7);
    assert!(lines.iter().any(|r| r["canonical"] == "3x3:3.5.6." && r["minimal"] == true));
}

#[test]
fn worker_count_does_not_change_the_census() {
    let dir = tempfile::tempdir().unwrap();
    let single = dir.path().join("single");
    let sharded = dir.path().join("sharded");
    let one = run(&["census", "--max-n", "8", "--out", single.to_str().unwrap()]);
    let three =
        run(&["census", "--max-n", "8", "--jobs", "3", "--out", sharded.to_str().unwrap()]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(three.status.code(), Some(0));
    let gather = |dir: &Path| -> Vec<String> {
        let mut keys: Vec<String> = fs::read_to_string(dir.join("records.jsonl"))
            .unwrap()
            .lines()
            .map(|l| {
                let v: serde_json::Value = serde_json::from_str(l).unwrap();
                v["canonical"].as_str().unwrap().to_owned()
            })
            .collect();
        keys.sort();
        keys
    };
    assert_eq!(gather(&single), gather(&sharded));
    let records = |out: &Output| -> serde_json::Value {
        serde_json::from_str::<serde_json::Value>(&stdout(out)).unwrap()["records"].clone()
    };
    assert_eq!(records(&one), records(&three));
}

#[test]
fn usage_errors_exit_with_two() {
    let output = run(&["classify"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run(&["census", "--max-n", "30"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run(&["construct", "leafmatch", "--tree", "ring 5"]);
    assert_eq!(output.status.code(), Some(2));
}
