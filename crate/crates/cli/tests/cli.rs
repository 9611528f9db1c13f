use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn synergy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_synergy"))
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

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("synergy-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

/// Writes a built-in example to a file, as a user would.
fn example_file(dir: &PathBuf, name: &str) -> String {
    let o = synergy(&["example", name]);
    assert_eq!(o.status.code(), Some(0));
    let path = dir.join(format!("{name}.json"));
    fs::write(&path, &o.stdout).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn dining_pairwise_coins_know() {
    let dir = scratch("dining");
    let path = example_file(&dir, "dining");
    let o = synergy(&["check", "--model", &path, "--formula", "[ab,ac,bc]p | [ab,ac,bc]~p", "--all-worlds"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).ends_with("holds\n"));
    let o = synergy(&["check", "--model", &path, "--formula", "[ab,ac]p | [ab,ac]~p"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn improper_frame_is_reported() {
    let dir = scratch("improper");
    let path = example_file(&dir, "improper");
    let o = synergy(&["props", "--model", &path, "--level", "proper"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("proper       FAILS at (w1,w2)"), "{}", stdout(&o));
    let o = synergy(&["props", "--model", &path, "--level", "delta"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn translate_fig3() {
    let dir = scratch("translate");
    let path = example_file(&dir, "fig3");
    let o = synergy(&["translate", "--model", &path, "--verify", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("certified"));
    let out = stdout(&o);
    assert!(out.contains(r#""faces": [[["a","b"],3],[["a"],3],[["b"],1]]"#), "{out}");

    let model = dir.join("out.json");
    let mapping = dir.join("map.json");
    let o = synergy(&[
        "translate",
        "--model",
        &path,
        "--out",
        model.to_str().unwrap(),
        "--mapping",
        mapping.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "S1 = {ab1,a1,b1}\nS2 = {ab2,a1,b1}\nS3 = {ab3,a3,b1}\n");
    let map: serde_json::Value = serde_json::from_str(&fs::read_to_string(&mapping).unwrap()).unwrap();
    assert_eq!(map["w3"], "S3");
    let o = synergy(&["validate", "--model", model.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn translate_other_order_still_certifies() {
    let o = synergy(&["translate", "--example", "fig3", "--verify", "2", "--order", "w3,w1,w2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["certified"], true);
}

#[test]
fn translate_refuses_improper() {
    let o = synergy(&["translate", "--example", "improper"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("proper"));
}

#[test]
fn unravel_marks_interior() {
    let o = synergy(&["unravel", "--example", "nostd", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let interior = v["interior"].as_array().unwrap();
    let worlds = v["worlds"].as_array().unwrap();
    assert!(!interior.is_empty() && interior.len() < worlds.len());
}

#[test]
fn quotient_collapses_or_reports() {
    let o = synergy(&["quotient", "--example", "improper", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["model"]["worlds"].as_array().unwrap().len(), 1);
    assert_eq!(v["classes"]["w2"], "w1");

    let dir = scratch("quotient");
    let text = fs::read_to_string(example_file(&dir, "improper"))
        .unwrap()
        .replace(r#""w2": ["p"]"#, r#""w2": []"#);
    let path = dir.join("divergent.json");
    fs::write(&path, text).unwrap();
    let o = synergy(&["quotient", "--model", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(w1,w2) on p"), "{}", stdout(&o));
}

#[test]
fn soundness_scans() {
    let o = synergy(&["soundness", "--scheme", "T", "--trials", "200", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let again = synergy(&["soundness", "--scheme", "T", "--trials", "200", "--json"]);
    assert_eq!(o.stdout, again.stdout);
    let o = synergy(&["soundness", "--scheme", "eq2", "--trials", "1000"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("counterexample"));
    let o = synergy(&["soundness", "--scheme", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empty_pattern_note() {
    let o = synergy(&["check", "--example", "fig3", "--formula", "[]p | []~p", "--world", "w1"]);
    assert!(stderr(&o).contains("[] relates every pair"));
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(synergy(&["check", "--example", "fig3", "--formula", "[a"]).status.code(), Some(2));
    assert_eq!(synergy(&["check", "--example", "fig3", "--formula", "p", "--world", "w9"]).status.code(), Some(2));
    assert_eq!(synergy(&["validate", "--model", "/nonexistent/model.json"]).status.code(), Some(2));
    assert_eq!(synergy(&["example", "nope"]).status.code(), Some(2));
    assert_eq!(synergy(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(synergy(&["props", "--example", "dining"]).status.code(), Some(2));
}

#[test]
fn invalid_complex_is_a_violation() {
    let dir = scratch("invalid");
    let text = fs::read_to_string(example_file(&dir, "queue"))
        .unwrap()
        .replace(r#"[["P"],0],[["Q"],0]]"#, r#"[["P"],0]]"#);
    let path = dir.join("broken.json");
    fs::write(&path, text).unwrap();
    let o = synergy(&["validate", "--model", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("invalid"), "{}", stderr(&o));
}

#[test]
fn examples_listed() {
    let o = synergy(&["example"]);
    assert_eq!(stdout(&o), "queue\nconsensus\ndining\nsubworld\nnostd\nfig3\nimproper\n");
}
