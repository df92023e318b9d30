//! Checks every case of the corpus and assembles a deterministic report.

mod checks;
pub mod corpus;

use std::fmt;
use std::path::Path;
use std::sync::mpsc;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::WordProblem;
use crate::exec::Execution;
use crate::surgery::{fit_linking_matrix, Assertion, FitProblem, Scenario, SurgeryError};

pub use checks::{check_case, check_knot};
pub use corpus::{Corpus, Issue};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(120);

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("corpus is invalid:\n{}", .0.iter().map(|i| format!("  {i}")).collect::<Vec<_>>().join("\n"))]
    Corpus(Vec<Issue>),
    #[error("no case {0:?} in the corpus")]
    UnknownCase(String),
    #[error("no link {0:?} in the corpus")]
    UnknownLink(String),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Undecided,
    Fail,
}

impl Verdict {
    /// Failure dominates, then undecided.
    pub fn combine(self, other: Verdict) -> Verdict {
        self.max(other)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Undecided => "undecided",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub case: String,
    pub check: String,
    pub verdict: Verdict,
    pub expected: String,
    pub actual: String,
}

impl CheckResult {
    pub(crate) fn new(
        case: &str,
        check: impl Into<String>,
        verdict: Verdict,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) -> Self {
        CheckResult {
            case: case.to_string(),
            check: check.into(),
            verdict,
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    pub(crate) fn compare<T: PartialEq + fmt::Display>(case: &str, check: impl Into<String>, expected: T, actual: T) -> Self {
        let v = if expected == actual { Verdict::Pass } else { Verdict::Fail };
        CheckResult::new(case, check, v, expected, actual)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub exec: Execution,
    pub word_problem: WordProblem,
    /// Also decide every group equality with the Garside normal form.
    pub cross_check: bool,
    /// Per case (and per knot); `None` waits forever.
    pub timeout: Option<Duration>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            exec: Execution::default(),
            word_problem: WordProblem::default(),
            cross_check: false,
            timeout: Some(DEFAULT_TIMEOUT),
        }
    }
}

/// Checks sorted by case key, then check name. Knot-level checks use the
/// key `knot:<id>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<CheckResult>,
    pub cases: Vec<(String, Verdict)>,
}

pub fn knot_key(id: &str) -> String {
    format!("knot:{id}")
}

impl Report {
    fn assemble(corpus: &Corpus, case_ids: &[&str], mut checks: Vec<CheckResult>) -> Report {
        checks.sort_by(|a, b| a.case.cmp(&b.case).then_with(|| a.check.cmp(&b.check)));
        let verdict_of = |key: &str| {
            checks.iter().filter(|c| c.case == key).fold(Verdict::Pass, |v, c| v.combine(c.verdict))
        };
        let mut cases: Vec<(String, Verdict)> = case_ids
            .iter()
            .map(|id| {
                let case = corpus.case(id).expect("case ids come from the corpus");
                let v = verdict_of(id).combine(verdict_of(&knot_key(&case.knot)));
                (id.to_string(), v)
            })
            .collect();
        cases.sort();
        Report { checks, cases }
    }

    /// Overall verdict of the cases; knot checks count through their cases.
    pub fn verdict(&self) -> Verdict {
        let cases = self.cases.iter().fold(Verdict::Pass, |v, (_, c)| v.combine(*c));
        self.checks.iter().fold(cases, |v, c| v.combine(c.verdict))
    }

    pub fn passed_cases(&self) -> usize {
        self.cases.iter().filter(|(_, v)| *v == Verdict::Pass).count()
    }

    pub fn case_verdict(&self, id: &str) -> Option<Verdict> {
        self.cases.iter().find(|(c, _)| c == id).map(|(_, v)| *v)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.verdict != Verdict::Pass)
    }

    /// 0 pass, 1 failure, 3 undecided.
    pub fn exit_code(&self) -> i32 {
        match self.verdict() {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Undecided => 3,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.checks).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (id, v) in &self.cases {
            let n = self.checks.iter().filter(|c| &c.case == id).count();
            out.push_str(&format!("{id:<14} {v:<9} {n} checks\n"));
        }
        for c in self.failures() {
            out.push_str(&format!(
                "{} {} {}: expected {}, got {}\n",
                c.verdict.to_string().to_uppercase(),
                c.case,
                c.check,
                c.expected,
                c.actual
            ));
        }
        out.push_str(&format!(
            "{}/{} cases pass, {} checks\n",
            self.passed_cases(),
            self.cases.len(),
            self.checks.len()
        ));
        out
    }
}

fn with_timeout<T, F>(timeout: Option<Duration>, f: F) -> Option<T>
where
    T: Send + 'static,
    F: FnOnce() -> T + Send + 'static,
{
    let Some(limit) = timeout else { return Some(f()) };
    let (tx, rx) = mpsc::channel();
    // A timed-out worker is detached; its result is dropped when it finishes.
    std::thread::spawn(move || {
        let _ = tx.send(f());
    });
    rx.recv_timeout(limit).ok()
}

fn timed_out(key: &str, timeout: Option<Duration>) -> CheckResult {
    let limit = timeout.map(|d| format!("{}s", d.as_secs_f64())).unwrap_or_default();
    CheckResult::new(key, "timeout", Verdict::Undecided, format!("finished within {limit}"), "timed out")
}

fn run_case(corpus: &Corpus, id: &str, opts: &VerifyOptions) -> Vec<CheckResult> {
    let case = corpus.case(id).expect("case exists").clone();
    let knot = corpus.knot(&case.knot).cloned();
    let link = corpus.link(&case.surgery.link).cloned();
    let o = *opts;
    with_timeout(opts.timeout, move || check_case(&case, knot.as_ref(), link.as_ref(), &o))
        .unwrap_or_else(|| vec![timed_out(id, opts.timeout)])
}

fn run_knot(corpus: &Corpus, id: &str, opts: &VerifyOptions) -> Vec<CheckResult> {
    let knot = corpus.knot(id).expect("knot exists").clone();
    let o = *opts;
    with_timeout(opts.timeout, move || check_knot(&knot, &o)).unwrap_or_else(|| vec![timed_out(&knot_key(id), opts.timeout)])
}

/// Every case and every knot of the corpus.
pub fn verify_corpus(corpus: &Corpus, opts: &VerifyOptions) -> Report {
    let case_ids: Vec<&str> = corpus.cases.iter().map(|c| c.id.as_str()).collect();
    let knot_ids: Vec<&str> = corpus.knots.iter().map(|k| k.id.as_str()).collect();
    let mut checks: Vec<CheckResult> = opts.exec.map(&case_ids, |id| run_case(corpus, id, opts)).concat();
    checks.extend(opts.exec.map(&knot_ids, |id| run_knot(corpus, id, opts)).concat());
    Report::assemble(corpus, &case_ids, checks)
}

/// One case together with the checks of its knot.
pub fn verify_case(corpus: &Corpus, id: &str, opts: &VerifyOptions) -> Result<Report, VerifyError> {
    let case = corpus.case(id).ok_or_else(|| VerifyError::UnknownCase(id.to_string()))?;
    let mut checks = run_case(corpus, id, opts);
    if corpus.knot(&case.knot).is_some() {
        checks.extend(run_knot(corpus, &case.knot, opts));
    }
    Ok(Report::assemble(corpus, &[id], checks))
}

pub fn load_corpus(path: &Path) -> Result<Corpus, VerifyError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| VerifyError::Io { path: path.display().to_string(), source })?;
    Corpus::from_json(&text)
}

pub fn verify_all(path: &Path, opts: &VerifyOptions) -> Result<Report, VerifyError> {
    Ok(verify_corpus(&load_corpus(path)?, opts))
}

/// The constraints a link's linking matrix must satisfy: every surgery and
/// quotient script of every case on the link, each ending with `|H_1|`
/// equal to the slope, the surgery scripts also with their final coefficient.
pub fn link_fit_problem(corpus: &Corpus, link_id: &str) -> Result<FitProblem, VerifyError> {
    let link = corpus.link(link_id).ok_or_else(|| VerifyError::UnknownLink(link_id.to_string()))?;
    let mut scenarios = Vec::new();
    for case in corpus.cases_on_link(link_id) {
        let s = &case.surgery;
        let mut assertions = s.assertions.clone();
        if let Some(last) = s.moves.len().checked_sub(1) {
            assertions.push(Assertion {
                after: last,
                coeffs: [(s.knot_component.clone(), s.final_coefficient)].into(),
                h1_order: Some(case.slope),
            });
        }
        scenarios.push(Scenario {
            label: format!("{}/surgery", case.id),
            coefficients: s.coefficients.clone(),
            moves: s.moves.clone(),
            assertions,
        });
        if let Some(q) = &case.quotient {
            let mut assertions = q.assertions.clone();
            assertions.push(Assertion { after: q.moves.len() - 1, coeffs: Default::default(), h1_order: Some(case.slope) });
            scenarios.push(Scenario {
                label: format!("{}/quotient", case.id),
                coefficients: s.coefficients.clone(),
                moves: q.moves.clone(),
                assertions,
            });
        }
    }
    Ok(FitProblem { components: link.components.clone(), scenarios })
}

/// All linking matrices with entries in `[-bound, bound]` fitting every
/// case on the link.
pub fn fit_link(corpus: &Corpus, link_id: &str, bound: i64, exec: Execution) -> Result<Vec<Vec<Vec<i64>>>, VerifyError> {
    let problem = link_fit_problem(corpus, link_id)?;
    Ok(fit_linking_matrix(&problem, bound, exec)?)
}
