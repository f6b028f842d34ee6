use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chordbar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn examples(field: &str) -> TempDir {
    let dir = TempDir::new().unwrap();
    let o = run(&["fixtures", "--field", field, "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    dir
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn write_json(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path
}

#[test]
fn barcode_of_acyclic_pair_and_single_generator() {
    let d = examples("Q");
    let o = run(&["barcode", &p(&d, "acyclic-pair.json")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "[1, 2) deg 0\n");
    let o = run(&["barcode", &p(&d, "one-generator.json"), "--engine", "both"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "[2, inf) deg 1\n");
}

#[test]
fn barcode_formats() {
    let d = examples("F2");
    let o = run(&["barcode", &p(&d, "acyclic-pair.json"), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, json!([{"start": "1", "end": "2", "degree": 0}]));
    let o = run(&["barcode", &p(&d, "acyclic-pair.json"), "--format", "csv"]);
    assert!(stdout(&o).lines().any(|l| l == "1,2,0"), "{}", stdout(&o));
    let o = run(&["barcode", &p(&d, "acyclic-pair.json"), "--format", "diagram", "--width", "20"]);
    assert_eq!(code(&o), 0);
    assert!(!stdout(&o).is_empty());
}

#[test]
fn malformed_input_exits_2() {
    let d = TempDir::new().unwrap();
    let bad = d.path().join("bad.json");
    std::fs::write(&bad, "{ \"field\": ").unwrap();
    let o = run(&["barcode", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));
    let o = run(&["barcode", d.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn invalid_complex_exits_1() {
    let d = TempDir::new().unwrap();
    let f = write_json(
        d.path(),
        "c.json",
        &json!({
            "field": "Q",
            "generators": [{"id": "x", "action": "1", "degree": 1}, {"id": "y", "action": "2", "degree": 0}],
            "differential": {"x": [{"id": "y", "coeff": "1"}]}
        }),
    );
    let o = run(&["validate", f.to_str().unwrap()]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));

    let f = write_json(
        d.path(),
        "dd.json",
        &json!({
            "field": "Q",
            "generators": [
                {"id": "a", "action": "1", "degree": 0},
                {"id": "b", "action": "2", "degree": 1},
                {"id": "c", "action": "3", "degree": 2}
            ],
            "differential": {"b": [{"id": "a", "coeff": "1"}], "c": [{"id": "b", "coeff": "1"}]}
        }),
    );
    let o = run(&["validate", f.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("d(d(c))"), "{}", stderr(&o));
}

#[test]
fn validate_detects_each_kind() {
    let d = examples("F5");
    for (name, prefix) in [
        ("acyclic-pair.json", "valid complex"),
        ("standard-unknot.json", "valid DGA"),
        ("birth-death-timeline.json", "valid timeline"),
    ] {
        let o = run(&["validate", &p(&d, name)]);
        assert_eq!(code(&o), 0, "{name}: {}", stderr(&o));
        assert!(stdout(&o).starts_with(prefix), "{name}: {}", stdout(&o));
    }
    let o = run(&[
        "validate",
        &p(&d, "augmented-pair.json"),
        "--augmentation",
        &p(&d, "augmented-pair-augmentation.json"),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("augmentation: valid"));
}

#[test]
fn simulate_reports_each_event() {
    let d = examples("Q");
    let o = run(&["simulate", &p(&d, "handle-slide-timeline.json")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("unaffected: pass"), "{}", stdout(&o));
    let o = run(&["simulate", &p(&d, "exit-below-timeline.json")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("[1, 3) deg 0 replaced by [3, inf) deg 1"), "{}", stdout(&o));
    let o = run(&["simulate", &p(&d, "birth-death-timeline.json"), "--vineyard", "-"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("bar added: pass") && out.contains("bar removed: pass"), "{out}");
    assert!(out.contains("t,bar_id,start,end"), "{out}");
}

#[test]
fn simultaneous_events_exit_1() {
    let d = examples("Q");
    let text = std::fs::read_to_string(p(&d, "handle-slide-timeline.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    let entries = v["entries"].as_array_mut().unwrap();
    let slide = entries[1].clone();
    entries.insert(2, slide);
    let f = write_json(d.path(), "twice.json", &v);
    let o = run(&["simulate", f.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("second bifurcation at time 1"), "{}", stderr(&o));
}

#[test]
fn linearize_window_checks() {
    let d = examples("Q");
    let dga = p(&d, "augmented-pair.json");
    let aug = p(&d, "augmented-pair-augmentation.json");
    let o = run(&["linearize", &dga, "--augmentation", &aug, "--lower", "0", "--upper", "3", "--l", "1"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("exceeds l"), "{}", stderr(&o));

    // m2 at length 2 lies outside [0, 2).
    let o = run(&["linearize", &dga, "--augmentation", &aug, "--lower", "0", "--upper", "2", "--l", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "[1, inf) deg 0\n");

    // ε(p) = 1 turns ∂m2 = p·m1 into ∂m2 = m1.
    let o = run(&["linearize", &dga, "--augmentation", &aug, "--lower", "1", "--upper", "3", "--l", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "[1, 2) deg 0\n");

    // Without the augmentation the differential vanishes.
    let o = run(&["linearize", &dga, "--lower", "1", "--upper", "3", "--l", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "[1, inf) deg 0\n[2, inf) deg 1\n");
}

#[test]
fn linearize_mixed_pair_writes_complex() {
    let d = examples("Q");
    let out = d.path().join("lin.json");
    let o = run(&[
        "linearize",
        &p(&d, "mixed-pair.json"),
        "--lower",
        "1",
        "--upper",
        "3",
        "--l",
        "2",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "[1, 2) deg 0\n");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["generators"].as_array().unwrap().len(), 2);
    let o = run(&["barcode", out.to_str().unwrap()]);
    assert_eq!(stdout(&o), "[1, 2) deg 0\n");
}

#[test]
fn linearize_two_copy_template_keeps_morse_chords() {
    let d = examples("F2");
    let o = run(&[
        "linearize",
        &p(&d, "two-copy-template.json"),
        "--augmentation",
        &p(&d, "two-copy-augmentation.json"),
        "--lower",
        "10",
        "--upper",
        "21/2",
        "--l",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let starts: Vec<&str> = v.as_array().unwrap().iter().map(|b| b["start"].as_str().unwrap()).collect();
    assert_eq!(starts, vec!["101/10", "51/5"]);
}

#[test]
fn bound_counts() {
    let o = run(&["bound", "--sigma", "[3/2, inf, 3/2]", "--betti", "[1, 0, 1]", "--osc", "7/5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("count: 2"), "{}", stdout(&o));
    let o = run(&["bound", "--sigma", "[3/2, inf, 3/2]", "--betti", "[1, 0, 1]", "--osc", "3/2"]);
    assert!(stdout(&o).contains("count: 0 (strict inequality required)"), "{}", stdout(&o));
    let o = run(&["bound", "--sigma", "[3/2, inf, 3/2]", "--betti", "[1, 0, 1]", "--osc", "2"]);
    assert!(stdout(&o).contains("count: 0\n"), "{}", stdout(&o));

    let o = run(&["bound", "--sigma", "[3/2, 3/2]", "--betti", "[1, 1]", "--osc", "3/2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("count: 0 (strict inequality required)"), "{}", stdout(&o));

    let o = run(&["bound", "--sigma", "[inf, inf]", "--betti", "[1, 1]", "--l", "2", "--osc", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("binding: l"), "{}", stdout(&o));

    // Asymmetric σ and mismatched lengths are domain errors.
    let o = run(&["bound", "--sigma", "[1, 2]", "--betti", "[1, 1]", "--osc", "1"]);
    assert_eq!(code(&o), 1);
    let o = run(&["bound", "--sigma", "[2, 2]", "--betti", "[1]", "--osc", "1"]);
    assert_eq!(code(&o), 1);
    let o = run(&["bound", "--sigma", "[2, 2]", "--betti", "[1, 1]"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn bound_from_profile_files() {
    let d = examples("Q");
    let o = run(&[
        "bound",
        "--sigma",
        &p(&d, "stabilized-unknot-sigma.json"),
        "--betti",
        &p(&d, "stabilized-unknot-betti.json"),
        "--osc-profile",
        &p(&d, "sharpness-profile.csv"),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("oscillation: 1\n"), "{}", stdout(&o));
    assert!(stdout(&o).contains("count: 2"));
}

#[test]
fn fixtures_listing_and_unknown_name() {
    let o = run(&["fixtures"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l == "two-copy-template"));
    let o = run(&["fixtures", "no-such-thing"]);
    assert_eq!(code(&o), 2);
    let o = run(&["fixtures", "one-generator", "--field", "F2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["field"], "F2");
}

#[test]
fn stamp_prefixes_human_output_only() {
    let d = examples("Q");
    let o = run(&["--stamp", "barcode", &p(&d, "acyclic-pair.json")]);
    assert!(stdout(&o).starts_with("# chordbar "), "{}", stdout(&o));
    let o = run(&["--stamp", "barcode", &p(&d, "acyclic-pair.json"), "--format", "json"]);
    assert!(serde_json::from_str::<Value>(&stdout(&o)).is_ok());
}
