use std::collections::HashMap;
use std::fmt;

use super::corpus::{Case, Comparison, Knot, Link, Relation, SetKind, Step, StepOp};
use super::{knot_key, CheckResult, Verdict, VerifyOptions};
use crate::braid::{BraidError, BraidWord, WordProblem, WordProblemMethod};
use crate::invariants::{
    alexander, alexander_degree, closure_component_count, genus_positive_braid, is_lspace_alexander_form, jones,
    JonesPolynomial, LaurentPolynomial,
};
use crate::surgery::{run_script, SurgeryComponent, SurgeryPresentation, TwistScript};
use crate::tangle::{montesinos_trick_fraction, ContinuedFraction, ExtendedRational, MontesinosPresentation};

fn parity_name(odd: bool) -> &'static str {
    if odd {
        "mirror"
    } else {
        "same"
    }
}

/// Group equality under the configured procedure, optionally confirmed by
/// the normal form. Literal equality short-circuits.
fn group_equal(u: &BraidWord, v: &BraidWord, opts: &VerifyOptions) -> Result<bool, String> {
    if u == v {
        return Ok(true);
    }
    let primary = opts.word_problem.equals(u, v).map_err(|e| e.to_string())?;
    if opts.cross_check {
        let nf = WordProblem { method: WordProblemMethod::NormalForm, ..opts.word_problem }
            .equals(u, v)
            .map_err(|e| e.to_string())?;
        if nf != primary {
            return Err(format!("word problem methods disagree ({primary} vs {nf})"));
        }
    }
    Ok(primary)
}

fn compare_words(
    key: &str,
    name: &str,
    expected: &BraidWord,
    actual: &BraidWord,
    mode: Comparison,
    opts: &VerifyOptions,
) -> CheckResult {
    let outcome = match mode {
        Comparison::Literal => Ok(expected == actual),
        Comparison::Free => Ok(expected.free_reduce() == actual.free_reduce()),
        Comparison::Group => group_equal(expected, actual, opts),
    };
    let (verdict, note) = match outcome {
        Ok(true) => (Verdict::Pass, String::new()),
        Ok(false) => (Verdict::Fail, String::new()),
        Err(msg) => {
            let undecided = msg.contains("undecided");
            (if undecided { Verdict::Undecided } else { Verdict::Fail }, format!(" ({msg})"))
        }
    };
    let mode = match mode {
        Comparison::Literal => "literally",
        Comparison::Free => "freely",
        Comparison::Group => "in the group",
    };
    CheckResult::new(key, name, verdict, format!("{expected} {mode}"), format!("{actual}{note}"))
}

struct ChainWalk {
    word: BraidWord,
    mirrors: bool,
    labels: HashMap<String, (BraidWord, bool)>,
    results: Vec<CheckResult>,
}

fn apply_step(w: &BraidWord, s: &Step) -> Result<BraidWord, BraidError> {
    Ok(match s.op {
        StepOp::Conjugate => {
            let by = BraidWord::parse(w.strands(), s.by.as_deref().unwrap_or(""))?;
            w.conjugate(&by)?
        }
        StepOp::Flip => w.flip(),
        StepOp::Mirror => w.mirror(),
        StepOp::Reverse => w.reverse(),
        StepOp::Equal => w.clone(),
        StepOp::Stabilize => w.stabilize(),
        StepOp::Destabilize => w.destabilize()?,
    })
}

/// Applies each step and compares with the printed word. After a step with a
/// printed word the walk continues from that word, so one wrong step does not
/// spill into the next. With `check` off only words and labels are tracked.
fn walk_chain(key: &str, prefix: &str, start: BraidWord, steps: &[Step], opts: &VerifyOptions, check: bool) -> ChainWalk {
    let mut walk = ChainWalk { word: start, mirrors: false, labels: HashMap::new(), results: Vec::new() };
    let mut broken: Option<String> = None;
    for (j, s) in steps.iter().enumerate() {
        let name = format!("{prefix}/{:02}-{}", j + 1, s.op);
        if s.op == StepOp::Mirror {
            walk.mirrors = !walk.mirrors;
        }
        let applied = match &broken {
            Some(msg) => Err(msg.clone()),
            None => apply_step(&walk.word, s).map_err(|e| e.to_string()),
        };
        let expect = s.expect.as_deref().map(|e| {
            let strands = applied.as_ref().map(|w| w.strands()).unwrap_or(walk.word.strands());
            BraidWord::parse(strands, e)
        });
        match (applied, expect) {
            (Ok(w), Some(Ok(e))) => {
                if check {
                    walk.results.push(compare_words(key, &name, &e, &w, s.compare.unwrap_or(Comparison::Group), opts));
                }
                walk.word = e;
                broken = None;
            }
            (Err(msg), Some(Ok(e))) => {
                walk.results.push(CheckResult::new(key, &name, Verdict::Fail, &e, format!("step not applicable: {msg}")));
                walk.word = e;
                broken = None;
            }
            (_, Some(Err(err))) => {
                walk.results.push(CheckResult::new(key, &name, Verdict::Fail, "a valid printed word", err));
                broken = Some(format!("printed word of step {} is invalid", j + 1));
            }
            (Ok(w), None) => {
                if check {
                    walk.results.push(CheckResult::new(key, &name, Verdict::Pass, "applicable", &w));
                }
                walk.word = w;
            }
            (Err(msg), None) => {
                walk.results.push(CheckResult::new(key, &name, Verdict::Fail, "applicable", &msg));
                broken = Some(msg);
            }
        }
        if let Some(l) = &s.label {
            walk.labels.insert(l.clone(), (walk.word.clone(), walk.mirrors));
        }
    }
    walk
}

#[derive(PartialEq)]
struct Invariants {
    alexander: Option<LaurentPolynomial>,
    jones: JonesPolynomial,
}

impl Invariants {
    fn of(w: &BraidWord, mirrored: bool) -> Invariants {
        let j = jones(w);
        Invariants { alexander: alexander(w).ok(), jones: if mirrored { j.mirrored() } else { j } }
    }
}

impl fmt::Display for Invariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.alexander {
            Some(a) => write!(f, "Δ={a} V={}", self.jones),
            None => write!(f, "Δ=undefined V={}", self.jones),
        }
    }
}

fn word_or_fail(key: &str, name: &str, strands: usize, text: &str, out: &mut Vec<CheckResult>) -> Option<BraidWord> {
    match BraidWord::parse(strands, text) {
        Ok(w) => Some(w),
        Err(e) => {
            out.push(CheckResult::new(key, name, Verdict::Fail, "a valid word", e));
            None
        }
    }
}

/// Knot-level checks: the census word closes to a knot with the stated
/// genus and an L-space shaped Alexander polynomial, and the chain of
/// printed identities holds.
pub fn check_knot(knot: &Knot, opts: &VerifyOptions) -> Vec<CheckResult> {
    let key = knot_key(&knot.id);
    let key = key.as_str();
    let mut out = Vec::new();
    let Some(gamma) = word_or_fail(key, "word", knot.strands, &knot.word, &mut out) else { return out };
    out.push(CheckResult::compare(key, "closure-components", 1, closure_component_count(&gamma)));
    out.push(CheckResult::compare(key, "positive", true, gamma.is_positive()));
    let genus = genus_positive_braid(&gamma);
    if let Some(g) = knot.genus {
        let actual = genus.as_ref().map(|g| g.to_string()).unwrap_or_else(|e| e.to_string());
        out.push(CheckResult::compare(key, "genus", g.to_string(), actual));
    }
    match alexander(&gamma) {
        Ok(delta) => {
            let deg = alexander_degree(&delta);
            let expected = genus.as_ref().map(|g| g.to_string()).unwrap_or_else(|e| e.to_string());
            out.push(CheckResult::compare(key, "alexander-degree", expected, deg.to_string()));
            let v = if is_lspace_alexander_form(&delta) { Verdict::Pass } else { Verdict::Fail };
            out.push(CheckResult::new(key, "lspace-form", v, "±1 coefficients alternating in sign", &delta));
        }
        Err(e) => out.push(CheckResult::new(key, "alexander-degree", Verdict::Fail, "an Alexander polynomial", e)),
    }
    let walk = walk_chain(key, "chain", gamma.clone(), &knot.chain, opts, true);
    out.extend(walk.results);
    if walk.word.strands() == gamma.strands() {
        let start = Invariants::of(&gamma, walk.mirrors);
        let end = Invariants::of(&walk.word, false);
        out.push(CheckResult::compare(key, "chain/invariants", start, end));
    }
    out
}

/// The checks of one case, given its knot and link.
pub fn check_case(case: &Case, knot: Option<&Knot>, link: Option<&Link>, opts: &VerifyOptions) -> Vec<CheckResult> {
    let key = case.id.as_str();
    let mut out = Vec::new();

    let expected_kind = if case.slope % 2 == 1 { SetKind::Knot } else { SetKind::Link };
    out.push(CheckResult::new(
        key,
        "branching-set/parity",
        if expected_kind == case.branching_set.kind { Verdict::Pass } else { Verdict::Fail },
        format!("{expected_kind:?} for slope {}", case.slope).to_lowercase(),
        format!("{} is a {:?}", case.branching_set.name, case.branching_set.kind).to_lowercase(),
    ));

    match knot {
        Some(k) => braid_checks(case, k, opts, &mut out),
        None => out.push(CheckResult::new(key, "braid/knot", Verdict::Fail, &case.knot, "missing")),
    }
    match link {
        Some(l) => surgery_checks(case, l, &mut out),
        None => out.push(CheckResult::new(key, "surgery/link", Verdict::Fail, &case.surgery.link, "missing")),
    }
    out
}

fn braid_checks(case: &Case, knot: &Knot, opts: &VerifyOptions, out: &mut Vec<CheckResult>) {
    let key = case.id.as_str();
    let b = &case.braid;
    let Some(start) = word_or_fail(key, "braid/word", b.strands, &b.word, out) else { return };
    let walk = walk_chain(key, "braid", start.clone(), &b.steps, opts, true);
    out.extend(walk.results);

    let Some(gamma) = word_or_fail(key, "braid/census-word", knot.strands, &knot.word, out) else { return };
    let anchors = walk_chain(key, "chain", gamma.clone(), &knot.chain, opts, false).labels;
    let Some((anchor, anchor_mirrors)) = anchors.get(&b.target) else {
        out.push(CheckResult::new(key, "braid/anchor", Verdict::Fail, &b.target, "no such label"));
        return;
    };
    if anchor.strands() == walk.word.strands() {
        out.push(compare_words(key, "braid/anchor", anchor, &walk.word, Comparison::Group, opts));
    } else {
        out.push(CheckResult::new(key, "braid/anchor", Verdict::Fail, anchor, &walk.word));
    }

    let total = b.knot_is_mirror_of_word ^ walk.mirrors ^ anchor_mirrors;
    out.push(CheckResult::compare(key, "braid/mirror-parity", parity_name(case.surgery_on_mirror), parity_name(total)));

    if walk.word.strands() == start.strands() {
        let s = Invariants::of(&start, walk.mirrors);
        let e = Invariants::of(&walk.word, false);
        out.push(CheckResult::compare(key, "braid/invariants", s, e));
    }
    let normalized = b.knot_is_mirror_of_word ^ case.surgery_on_mirror;
    let s = Invariants::of(&start, normalized);
    let g = Invariants::of(&gamma, false);
    out.push(CheckResult::compare(key, "braid/census-invariants", g, s));

    for (j, f) in b.figure_words.iter().enumerate() {
        let name = format!("braid/figure-{:02}", j + 1);
        let Some(w) = word_or_fail(key, &name, f.strands, &f.word, out) else { continue };
        let expected = Invariants::of(&start, f.relation == Relation::Mirror);
        out.push(CheckResult::compare(key, name, expected, Invariants::of(&w, false)));
    }
}

fn presentation(link: &Link, coefficients: &[ExtendedRational]) -> Vec<SurgeryComponent> {
    link.components
        .iter()
        .zip(coefficients)
        .map(|(c, &coefficient)| SurgeryComponent { id: c.id.clone(), coefficient, unknotted: c.unknotted })
        .collect()
}

fn surgery_checks(case: &Case, link: &Link, out: &mut Vec<CheckResult>) {
    let key = case.id.as_str();
    let s = &case.surgery;
    let components = presentation(link, &s.coefficients);
    let initial = match SurgeryPresentation::new(components.clone(), link.linking.clone()) {
        Ok(p) => p,
        Err(e) => {
            out.push(CheckResult::new(key, "surgery/initial-h1", Verdict::Fail, case.slope, e));
            return;
        }
    };
    out.push(CheckResult::compare(key, "surgery/initial-h1", case.slope.to_string(), initial.h1_order().to_string()));

    let script = TwistScript {
        components: components.clone(),
        linking: link.linking.clone(),
        moves: s.moves.clone(),
        assertions: s.assertions.clone(),
    };
    let expected_script = format!("{} moves, {} assertion groups hold", s.moves.len(), s.assertions.len());
    match run_script(&script) {
        Ok(run) => {
            out.push(CheckResult::new(key, "surgery/script", Verdict::Pass, &expected_script, &expected_script));
            let r = &run.result;
            let actual = r.components().iter().map(|c| format!("{}={}", c.id, c.coefficient)).collect::<Vec<_>>().join(" ");
            out.push(CheckResult::compare(key, "surgery/final", format!("{}={}", s.knot_component, s.final_coefficient), actual));
        }
        Err(e) => out.push(CheckResult::new(key, "surgery/script", Verdict::Fail, &expected_script, e)),
    }

    let fin = s.final_coefficient;
    let magnitude = if fin.is_integer() { fin.abs().to_string() } else { format!("non-integer {fin}") };
    out.push(CheckResult::compare(key, "surgery/slope", case.slope.to_string(), magnitude));
    let sign = |negative: bool| if negative { "negative on the mirror" } else { "positive" };
    out.push(CheckResult::compare(key, "surgery/sign", sign(case.surgery_on_mirror), sign(fin.numerator() < 0)));

    let mut quotient_coefficients: Option<HashMap<String, ExtendedRational>> = None;
    if let Some(q) = &case.quotient {
        let script = TwistScript {
            components,
            linking: link.linking.clone(),
            moves: q.moves.clone(),
            assertions: q.assertions.clone(),
        };
        let expected_script = format!("{} moves, {} assertion groups hold", q.moves.len(), q.assertions.len());
        match run_script(&script) {
            Ok(run) => {
                out.push(CheckResult::new(key, "quotient/script", Verdict::Pass, &expected_script, &expected_script));
                out.push(CheckResult::compare(key, "quotient/h1", case.slope.to_string(), run.result.h1_order().to_string()));
                quotient_coefficients =
                    Some(run.result.components().iter().map(|c| (c.id.clone(), c.coefficient)).collect());
            }
            Err(e) => out.push(CheckResult::new(key, "quotient/script", Verdict::Fail, &expected_script, e)),
        }
    }

    let Some(t) = &case.tangles else { return };
    for (j, cf) in t.continued_fractions.iter().enumerate() {
        let name = format!("tangle/cf-{:02}", j + 1);
        let actual = match cf.terms.parse::<ContinuedFraction>().and_then(|c| c.value()) {
            Ok(v) => v.to_string(),
            Err(e) => e.to_string(),
        };
        out.push(CheckResult::compare(key, name, format!("{} = {}", cf.terms, cf.value), format!("{} = {actual}", cf.terms)));
    }
    for (j, tr) in t.trick.iter().enumerate() {
        let name = format!("tangle/trick-{:02}", j + 1);
        let mut problems = Vec::new();
        if let Some(qc) = &quotient_coefficients {
            match qc.get(&tr.component) {
                Some(c) if *c == tr.coefficient => {}
                Some(c) => problems.push(format!("quotient leaves {}={c}", tr.component)),
                None => problems.push(format!("quotient removes {}", tr.component)),
            }
        }
        let expected;
        match tr.writhe {
            Some(w) => {
                expected = format!("{}: {} - ({w}) = {}", tr.component, tr.coefficient, tr.fraction);
                match montesinos_trick_fraction(tr.coefficient, w) {
                    Ok(f) if f == tr.fraction => {}
                    Ok(f) => problems.push(format!("{} - ({w}) = {f}", tr.coefficient)),
                    Err(e) => problems.push(e.to_string()),
                }
            }
            None => {
                expected = format!("{}: {} and {} differ by an integer", tr.component, tr.coefficient, tr.fraction);
                match tr.coefficient.checked_sub(&tr.fraction) {
                    Ok(d) if d.is_integer() => {}
                    Ok(d) => problems.push(format!("difference {d}")),
                    Err(e) => problems.push(e.to_string()),
                }
            }
        }
        let (v, actual) =
            if problems.is_empty() { (Verdict::Pass, expected.clone()) } else { (Verdict::Fail, problems.join("; ")) };
        out.push(CheckResult::new(key, name, v, expected, actual));
    }
    if let Some(m) = &t.montesinos {
        let actual = match m.fractions.parse::<MontesinosPresentation>() {
            Ok(p) => p.determinant().to_string(),
            Err(e) => e.to_string(),
        };
        out.push(CheckResult::compare(key, "tangle/montesinos", case.slope.to_string(), actual));
    }
}
