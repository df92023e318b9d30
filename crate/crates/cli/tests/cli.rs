use std::io::Write;
use std::process::{Command, Output};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SCRIPT: &str = r#"{
  "components": [{"id": "C0", "coeff": "2"}, {"id": "C1", "coeff": "1", "unknotted": true}],
  "linking": [[0, 1], [1, 0]],
  "moves": [{"target": "C1", "t": -1}, {"target": "C1", "delete": true}],
  "assert": [{"after": 0, "coeffs": {"C0": "1", "C1": "inf"}}, {"after": 1, "h1_order": 1}]
}"#;

fn temp_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn braid_eq_exit_codes() {
    let o = verify(&["braid", "eq", "--n", "3", "1,2,1", "2,1,2"]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "equal"));
    let o = verify(&["braid", "eq", "--n", "3", "1", "2", "--method", "normal-form"]);
    assert_eq!((code(&o), stdout(&o).trim()), (1, "not equal"));
    let o = verify(&["braid", "eq", "--n", "3", "1,5", "2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("out of range"));
    let o = verify(&["braid", "eq", "--n", "4", "-1,2", "-1,2"]);
    assert_eq!(code(&o), 0);
    let o = verify(&["braid", "eq", "--n", "4", "(1,2,3)^4", "(3,2,1)^4", "--step-cap", "1"]);
    assert_eq!(code(&o), 3, "{}", stdout(&o));
}

#[test]
fn braid_inv_prints_invariants() {
    let o = verify(&["braid", "inv", "--n", "2", "1,1,1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("components: 1"), "{out}");
    assert!(out.contains("determinant: 3"), "{out}");
    assert!(out.contains("genus: 1"), "{out}");
}

#[test]
fn tangle_commands() {
    let o = verify(&["tangle", "cf", "[6,-2]"]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "13/2"));
    let o = verify(&["tangle", "cf", "-5/3"]);
    assert_eq!(code(&o), 0);
    let back = verify(&["tangle", "cf", stdout(&o).trim()]);
    assert_eq!(stdout(&back).trim(), "-5/3");
    let o = verify(&["tangle", "mdet", "3/5,2/3,-1/4"]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "61"));
    let o = verify(&["tangle", "mdet", "-3/5,-2/3,1/4"]);
    assert_eq!(stdout(&o).trim(), "61");
    assert_eq!(code(&verify(&["tangle", "cf", "[0,0]"])), 2);
    assert_eq!(code(&verify(&["tangle", "mdet", "1/1,2/3"])), 2);
}

#[test]
fn surgery_run_checks_assertions() {
    let f = temp_file(SCRIPT);
    let o = verify(&["surgery", "run", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    let bad = temp_file(&SCRIPT.replace("\"h1_order\": 1", "\"h1_order\": 2"));
    let o = verify(&["surgery", "run", bad.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("FAIL"));
    assert_eq!(code(&verify(&["surgery", "run", "/nonexistent.json"])), 2);
}

#[test]
fn case_and_all() {
    let o = verify(&["case", "t12533-37"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("1/1 cases pass"));
    assert_eq!(code(&verify(&["case", "t0"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let o = verify(&["all", "--json", json.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("18/18 cases pass"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let first = &report.as_array().unwrap()[0];
    let mut keys: Vec<&str> = first.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(keys, ["actual", "case", "check", "expected", "verdict"]);
}

#[test]
fn bad_corpus_and_caps() {
    let broken = temp_file(r#"{"links": [], "knots": [], "cases": [{"id": 3}]}"#);
    let o = verify(&["all", "--corpus", broken.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("$.cases[0]"), "{}", stderr(&o));

    let o = verify(&["case", "o9_40504-58", "--step-cap", "1", "--sequential"]);
    assert_eq!(code(&o), 3, "{}", stdout(&o));
}

#[test]
fn fit_linking() {
    let o = verify(&["fit-linking", "L12n1968"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("stored matrix fits"));
    let o = verify(&["fit-linking", "L12n1968", "--json", "--sequential"]);
    let sols: Vec<Vec<Vec<i64>>> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(sols.len(), 4);
    assert_eq!(code(&verify(&["fit-linking", "L0"])), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&verify(&["frobnicate"])), 2);
    assert_eq!(code(&verify(&["braid", "eq", "--n", "3", "1"])), 2);
    assert_eq!(code(&verify(&["--help"])), 0);
}
