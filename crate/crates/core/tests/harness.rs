use std::time::Duration;

use census_qa::braid::{WordProblem, WordProblemMethod};
use census_qa::exec::Execution;
use census_qa::surgery::orientation_classes;
use census_qa::verify::{self, Corpus, Report, Verdict, VerifyError, VerifyOptions};
use serde_json::Value;

fn sequential() -> VerifyOptions {
    VerifyOptions { exec: Execution::Sequential, timeout: None, ..VerifyOptions::default() }
}

fn run(c: &Corpus) -> Report {
    verify::verify_corpus(c, &sequential())
}

fn edited(f: impl FnOnce(&mut Value)) -> Result<Corpus, VerifyError> {
    let mut v: Value = serde_json::from_str(&Corpus::shipped().to_json()).unwrap();
    f(&mut v);
    Corpus::from_json(&v.to_string())
}

fn issues(r: Result<Corpus, VerifyError>) -> Vec<(String, String)> {
    match r {
        Err(VerifyError::Corpus(issues)) => issues.into_iter().map(|i| (i.path, i.message)).collect(),
        other => panic!("expected corpus issues, got {other:?}"),
    }
}

fn failing_cases(r: &Report) -> Vec<&str> {
    r.cases.iter().filter(|(_, v)| *v != Verdict::Pass).map(|(id, _)| id.as_str()).collect()
}

#[test]
fn shipped_corpus_round_trips() {
    let c = Corpus::shipped();
    assert_eq!((c.links.len(), c.knots.len(), c.cases.len()), (10, 9, 18));
    assert_eq!(Corpus::from_json(&c.to_json()).unwrap(), c);
}

#[test]
fn schema_errors_carry_json_paths() {
    let found = issues(edited(|v| {
        v["cases"][3]["slope"] = "64".into();
        v["cases"][0]["extra"] = 1.into();
        v["cases"][5]["surgery"]["coefficients"][0] = "1/0x".into();
        v["knots"][2].as_object_mut().unwrap().remove("word");
    }));
    let paths: Vec<&str> = found.iter().map(|(p, _)| p.as_str()).collect();
    assert_eq!(paths, ["$.cases[0]", "$.cases[3].slope", "$.cases[5].surgery.coefficients[0]", "$.knots[2]"]);
    assert!(found[0].1.contains("extra"));
    assert!(found[3].1.contains("word"));
}

#[test]
fn consistency_errors_carry_json_paths() {
    let found = issues(edited(|v| {
        v["cases"][2]["surgery"]["link"] = "L99".into();
        v["knots"][0]["chain"][0]["expect"] = "1,2,9".into();
        v["links"][0]["linking"][0][1] = 5.into();
    }));
    let paths: Vec<&str> = found.iter().map(|(p, _)| p.as_str()).collect();
    assert!(paths.contains(&"$.cases[2].surgery.link"), "{found:?}");
    assert!(paths.contains(&"$.knots[0].chain[0].expect"), "{found:?}");
    assert!(paths.iter().any(|p| p.starts_with("$.links[0].linking")), "{found:?}");
}

#[test]
fn malformed_json_is_reported_with_its_position() {
    let found = issues(Corpus::from_json("{\"links\": [}"));
    assert_eq!(found[0].0, "$");
    assert!(found[0].1.contains("line 1"));
}

#[test]
fn reports_are_deterministic_across_runs_and_execution_modes() {
    let c = Corpus::shipped();
    let a = run(&c);
    let b = run(&c);
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_text(), b.to_text());
    let par = verify::verify_corpus(&c, &VerifyOptions { exec: Execution::Parallel, ..sequential() });
    assert_eq!(par.to_json(), a.to_json());
    let keys: Vec<(&str, &str)> = a.checks.iter().map(|c| (c.case.as_str(), c.check.as_str())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn removing_a_case_leaves_the_others_unchanged() {
    let full = run(&Corpus::shipped());
    for skip in 0..18 {
        let mut c = Corpus::shipped();
        let gone = c.cases.remove(skip).id;
        let r = run(&c);
        let expected: Vec<_> = full.cases.iter().filter(|(id, _)| *id != gone).cloned().collect();
        assert_eq!(r.cases, expected, "without {gone}");
    }
}

#[test]
fn corrupted_letter_fails_its_case_at_the_first_group_step() {
    let c = edited(|v| {
        let w = v["cases"].as_array_mut().unwrap().iter_mut().find(|c| c["id"] == "t12681-62").unwrap();
        let word = w["braid"]["word"].as_str().unwrap().replacen("3,4,2", "3,4,1", 1);
        w["braid"]["word"] = word.into();
    })
    .unwrap();
    let r = run(&c);
    assert_eq!(failing_cases(&r), ["t12681-62"]);
    let first = r.failures().next().unwrap();
    assert_eq!((first.case.as_str(), first.check.as_str()), ("t12681-62", "braid/01-conjugate"));
}

#[test]
fn edited_slope_fails_only_its_case_at_the_homology_checks() {
    let c = edited(|v| {
        let w = v["cases"].as_array_mut().unwrap().iter_mut().find(|c| c["id"] == "t12533-37").unwrap();
        w["slope"] = 36.into();
    })
    .unwrap();
    let r = run(&c);
    assert_eq!(failing_cases(&r), ["t12533-37"]);
    let failed: Vec<&str> = r.failures().map(|c| c.check.as_str()).collect();
    for check in ["surgery/initial-h1", "surgery/slope", "quotient/h1"] {
        assert!(failed.contains(&check), "{check} missing from {failed:?}");
    }
}

#[test]
fn step_cap_gives_undecided_never_fail() {
    let opts = VerifyOptions {
        word_problem: WordProblem { method: WordProblemMethod::HandleReduction, step_cap: 1 },
        ..sequential()
    };
    let r = verify::verify_corpus(&Corpus::shipped(), &opts);
    assert!(r.checks.iter().all(|c| c.verdict != Verdict::Fail));
    assert!(r.checks.iter().any(|c| c.verdict == Verdict::Undecided));
    assert_eq!(r.verdict(), Verdict::Undecided);
    assert_eq!(r.exit_code(), 3);
}

#[test]
fn timeout_gives_undecided() {
    let opts = VerifyOptions { timeout: Some(Duration::from_nanos(1)), ..sequential() };
    let r = verify::verify_case(&Corpus::shipped(), "o9_40363-83", &opts).unwrap();
    assert_eq!(r.case_verdict("o9_40363-83"), Some(Verdict::Undecided));
    assert!(r.checks.iter().any(|c| c.check == "timeout"));
    assert_eq!(r.exit_code(), 3);
}

#[test]
fn single_case_includes_its_knot() {
    let r = verify::verify_case(&Corpus::shipped(), "t12533-38", &sequential()).unwrap();
    assert_eq!(r.cases, [("t12533-38".to_string(), Verdict::Pass)]);
    assert!(r.checks.iter().any(|c| c.case == "knot:t12533"));
    assert!(matches!(
        verify::verify_case(&Corpus::shipped(), "t0", &sequential()),
        Err(VerifyError::UnknownCase(_))
    ));
}

#[test]
fn stored_linking_matrices_are_fitted_solutions() {
    let c = Corpus::shipped();
    let archive: Value =
        serde_json::from_str(include_str!("../corpus/linking-solutions.json")).expect("archive parses");
    for link in &c.links {
        let fit = link.fit.expect("every link records its fit");
        let solutions = verify::fit_link(&c, &link.id, fit.bound, Execution::default()).unwrap();
        assert!(solutions.contains(&link.linking), "{}", link.id);
        assert_eq!(solutions.len(), fit.solutions, "{}", link.id);
        assert_eq!(orientation_classes(&solutions).len(), fit.orientation_classes, "{}", link.id);
        let archived: Vec<Vec<Vec<i64>>> = serde_json::from_value(archive[&link.id].clone()).unwrap();
        assert_eq!(archived, solutions, "{}", link.id);
    }
}
