//! The verification corpus: links with fitted linking matrices, census knots
//! with their anchoring braid chains, and one entry per surgery case.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::VerifyError;
use crate::braid::BraidWord;
use crate::surgery::{Assertion, FitComponent, Move};
use crate::tangle::{ContinuedFraction, ExtendedRational, MontesinosPresentation};

pub const SCHEMA: &str = include_str!("../../corpus/census.schema.json");
pub const SHIPPED_CORPUS: &str = include_str!("../../corpus/census.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Paper,
    PaperTypoCorrected,
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Link {
    pub id: String,
    pub components: Vec<FitComponent>,
    pub linking: Vec<Vec<i64>>,
    /// How many matrices within the bound fit the link's cases.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSummary>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSummary {
    pub bound: i64,
    pub solutions: usize,
    pub orientation_classes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepOp {
    Conjugate,
    Flip,
    Mirror,
    Reverse,
    Equal,
    Stabilize,
    Destabilize,
}

impl fmt::Display for StepOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StepOp::Conjugate => "conjugate",
            StepOp::Flip => "flip",
            StepOp::Mirror => "mirror",
            StepOp::Reverse => "reverse",
            StepOp::Equal => "equal",
            StepOp::Stabilize => "stabilize",
            StepOp::Destabilize => "destabilize",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    /// Equality in `B_n`.
    Group,
    /// Identical letter sequences.
    Literal,
    /// Equal after free reduction.
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub op: StepOp,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub by: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<Comparison>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Knot {
    pub id: String,
    pub strands: usize,
    pub word: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<u64>,
    pub chain: Vec<Step>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetKind {
    Knot,
    Link,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchingSet {
    pub name: String,
    pub kind: SetKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Same,
    Mirror,
}

/// A braid printed only alongside a figure; checked through invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FigureWord {
    pub strands: usize,
    pub word: String,
    pub relation: Relation,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseBraid {
    pub strands: usize,
    pub word: String,
    pub provenance: Provenance,
    /// The knot being surgered is the mirror of this word's closure.
    pub knot_is_mirror_of_word: bool,
    pub steps: Vec<Step>,
    /// Label of the knot-chain step this chain must end at.
    pub target: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub figure_words: Vec<FigureWord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSurgery {
    pub link: String,
    pub coefficients: Vec<ExtendedRational>,
    pub knot_component: String,
    #[serde(rename = "final")]
    pub final_coefficient: ExtendedRational,
    pub moves: Vec<Move>,
    #[serde(rename = "assert")]
    pub assertions: Vec<Assertion>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Twists along the knot component that exhibit the strongly invertible
/// link whose quotient gives the branching set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quotient {
    pub moves: Vec<Move>,
    #[serde(rename = "assert")]
    pub assertions: Vec<Assertion>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfCheck {
    pub terms: String,
    pub value: ExtendedRational,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrickCheck {
    pub component: String,
    pub coefficient: ExtendedRational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub writhe: Option<i64>,
    pub fraction: ExtendedRational,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MontesinosCheck {
    pub fractions: String,
    pub mirror_of_branching_set: bool,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tangles {
    #[serde(default)]
    pub continued_fractions: Vec<CfCheck>,
    #[serde(default)]
    pub trick: Vec<TrickCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub montesinos: Option<MontesinosCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub id: String,
    pub knot: String,
    pub slope: u64,
    pub branching_set: BranchingSet,
    pub surgery_on_mirror: bool,
    pub braid: CaseBraid,
    pub surgery: CaseSurgery,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<Quotient>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangles: Option<Tangles>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corpus {
    pub links: Vec<Link>,
    pub knots: Vec<Knot>,
    pub cases: Vec<Case>,
}

/// One schema or consistency problem, located by a `$.a[0].b` path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn schema_validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let schema: Value = serde_json::from_str(SCHEMA).expect("shipped schema is JSON");
        jsonschema::validator_for(&schema).expect("shipped schema compiles")
    })
}

fn pointer_to_path(location: &jsonschema::paths::Location) -> String {
    use jsonschema::paths::LocationSegment;
    let mut out = String::from("$");
    for seg in location.segments() {
        match seg {
            LocationSegment::Index(i) => out.push_str(&format!("[{i}]")),
            LocationSegment::Property(p) => {
                out.push('.');
                out.push_str(&p);
            }
        }
    }
    out
}

impl Corpus {
    pub fn shipped() -> Corpus {
        Corpus::from_json(SHIPPED_CORPUS).expect("shipped corpus is valid")
    }

    /// Parses, validates against the shipped schema, deserializes and then
    /// checks cross references. Every problem found is reported.
    pub fn from_json(text: &str) -> Result<Corpus, VerifyError> {
        let value: Value = serde_json::from_str(text).map_err(|e| {
            VerifyError::Corpus(vec![Issue {
                path: "$".into(),
                message: format!("not JSON (line {}, column {}): {e}", e.line(), e.column()),
            }])
        })?;
        let mut issues: Vec<Issue> = schema_validator()
            .iter_errors(&value)
            .map(|e| Issue { path: pointer_to_path(e.instance_path()), message: e.to_string() })
            .collect();
        if !issues.is_empty() {
            issues.sort_by(|a, b| a.path.cmp(&b.path).then(a.message.cmp(&b.message)));
            issues.dedup();
            return Err(VerifyError::Corpus(issues));
        }
        let corpus: Corpus = serde_path_to_error::deserialize(&value).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." { "$".to_string() } else { format!("$.{path}") };
            VerifyError::Corpus(vec![Issue { path, message: e.into_inner().to_string() }])
        })?;
        let issues = corpus.consistency_issues();
        if issues.is_empty() {
            Ok(corpus)
        } else {
            Err(VerifyError::Corpus(issues))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("corpus serializes")
    }

    pub fn case(&self, id: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.id == id)
    }

    pub fn knot(&self, id: &str) -> Option<&Knot> {
        self.knots.iter().find(|k| k.id == id)
    }

    pub fn link(&self, id: &str) -> Option<&Link> {
        self.links.iter().find(|l| l.id == id)
    }

    /// Cases whose surgery description uses the link `id`.
    pub fn cases_on_link<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Case> + 'a {
        self.cases.iter().filter(move |c| c.surgery.link == id)
    }

    fn consistency_issues(&self) -> Vec<Issue> {
        let mut issues = Vec::new();
        let mut push = |path: String, message: String| issues.push(Issue { path, message });

        for (kind, ids) in [
            ("link", self.links.iter().map(|l| l.id.as_str()).collect::<Vec<_>>()),
            ("knot", self.knots.iter().map(|k| k.id.as_str()).collect()),
            ("case", self.cases.iter().map(|c| c.id.as_str()).collect()),
        ] {
            let mut seen = HashSet::new();
            for (i, id) in ids.iter().enumerate() {
                if !seen.insert(*id) {
                    push(format!("$.{kind}s[{i}].id"), format!("duplicate {kind} id {id:?}"));
                }
            }
        }

        for (i, l) in self.links.iter().enumerate() {
            let n = l.components.len();
            let mut seen = HashSet::new();
            for (j, c) in l.components.iter().enumerate() {
                if !seen.insert(c.id.as_str()) {
                    push(format!("$.links[{i}].components[{j}].id"), format!("duplicate component {:?}", c.id));
                }
            }
            if l.linking.len() != n || l.linking.iter().any(|r| r.len() != n) {
                push(format!("$.links[{i}].linking"), format!("expected a {n}×{n} matrix"));
                continue;
            }
            for a in 0..n {
                if l.linking[a][a] != 0 {
                    push(format!("$.links[{i}].linking[{a}][{a}]"), "diagonal entries must be 0".into());
                }
                for b in 0..a {
                    if l.linking[a][b] != l.linking[b][a] {
                        push(format!("$.links[{i}].linking[{a}][{b}]"), "matrix is not symmetric".into());
                    }
                }
            }
        }

        let mut labels: HashMap<&str, HashSet<&str>> = HashMap::new();
        for (i, k) in self.knots.iter().enumerate() {
            let base = format!("$.knots[{i}]");
            check_word(k.strands, &k.word, format!("{base}.word"), &mut push);
            let set = labels.entry(k.id.as_str()).or_default();
            for (j, s) in k.chain.iter().enumerate() {
                if let Some(l) = &s.label {
                    if !set.insert(l.as_str()) {
                        push(format!("{base}.chain[{j}].label"), format!("duplicate label {l:?}"));
                    }
                }
            }
            check_steps(k.strands, &k.chain, &format!("{base}.chain"), &mut push);
        }

        for (i, c) in self.cases.iter().enumerate() {
            let base = format!("$.cases[{i}]");
            match labels.get(c.knot.as_str()) {
                None => push(format!("{base}.knot"), format!("unknown knot {:?}", c.knot)),
                Some(set) if !set.contains(c.braid.target.as_str()) => push(
                    format!("{base}.braid.target"),
                    format!("knot {:?} has no chain step labelled {:?}", c.knot, c.braid.target),
                ),
                _ => {}
            }
            check_word(c.braid.strands, &c.braid.word, format!("{base}.braid.word"), &mut push);
            check_steps(c.braid.strands, &c.braid.steps, &format!("{base}.braid.steps"), &mut push);
            for (j, f) in c.braid.figure_words.iter().enumerate() {
                check_word(f.strands, &f.word, format!("{base}.braid.figure_words[{j}].word"), &mut push);
            }

            let s = &c.surgery;
            let Some(link) = self.link(&s.link) else {
                push(format!("{base}.surgery.link"), format!("unknown link {:?}", s.link));
                continue;
            };
            let ids: HashSet<&str> = link.components.iter().map(|x| x.id.as_str()).collect();
            if s.coefficients.len() != link.components.len() {
                push(
                    format!("{base}.surgery.coefficients"),
                    format!("{} coefficients for {} components of {}", s.coefficients.len(), link.components.len(), link.id),
                );
            }
            if !ids.contains(s.knot_component.as_str()) {
                push(format!("{base}.surgery.knot_component"), format!("{} has no component {:?}", link.id, s.knot_component));
            }
            check_script(&ids, &s.moves, &s.assertions, &format!("{base}.surgery"), &mut push);
            if let Some(q) = &c.quotient {
                check_script(&ids, &q.moves, &q.assertions, &format!("{base}.quotient"), &mut push);
            }
            if let Some(t) = &c.tangles {
                for (j, cf) in t.continued_fractions.iter().enumerate() {
                    if let Err(e) = cf.terms.parse::<ContinuedFraction>() {
                        push(format!("{base}.tangles.continued_fractions[{j}].terms"), e.to_string());
                    }
                }
                for (j, tr) in t.trick.iter().enumerate() {
                    if !ids.contains(tr.component.as_str()) {
                        push(format!("{base}.tangles.trick[{j}].component"), format!("{} has no component {:?}", link.id, tr.component));
                    }
                }
                if let Some(m) = &t.montesinos {
                    if let Err(e) = m.fractions.parse::<MontesinosPresentation>() {
                        push(format!("{base}.tangles.montesinos.fractions"), e.to_string());
                    }
                }
            }
        }
        issues
    }
}

fn check_word(strands: usize, text: &str, path: String, push: &mut impl FnMut(String, String)) {
    if let Err(e) = BraidWord::parse(strands, text) {
        push(path, e.to_string());
    }
}

fn check_steps(strands: usize, steps: &[Step], base: &str, push: &mut impl FnMut(String, String)) {
    let mut n = strands;
    for (j, s) in steps.iter().enumerate() {
        match s.op {
            StepOp::Stabilize => n += 1,
            StepOp::Destabilize => n = n.saturating_sub(1).max(1),
            _ => {}
        }
        if let Some(by) = &s.by {
            check_word(n, by, format!("{base}[{j}].by"), push);
        }
        if let Some(e) = &s.expect {
            check_word(n, e, format!("{base}[{j}].expect"), push);
        }
    }
}

fn check_script(
    ids: &HashSet<&str>,
    moves: &[Move],
    assertions: &[Assertion],
    base: &str,
    push: &mut impl FnMut(String, String),
) {
    for (j, m) in moves.iter().enumerate() {
        if !ids.contains(m.target()) {
            push(format!("{base}.moves[{j}].target"), format!("no component {:?}", m.target()));
        }
    }
    for (j, a) in assertions.iter().enumerate() {
        if a.after >= moves.len() {
            push(format!("{base}.assert[{j}].after"), format!("there are only {} moves", moves.len()));
        }
        let unknown: BTreeMap<_, _> = a.coeffs.iter().filter(|(k, _)| !ids.contains(k.as_str())).collect();
        for k in unknown.keys() {
            push(format!("{base}.assert[{j}].coeffs.{k}"), format!("no component {k:?}"));
        }
    }
}
