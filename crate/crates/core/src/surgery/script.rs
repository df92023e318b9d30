use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{SurgeryComponent, SurgeryError, SurgeryPresentation};
use crate::tangle::ExtendedRational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Move {
    Twist { target: String, t: i64 },
    Delete { target: String, delete: bool },
}

impl Move {
    pub fn twist(target: impl Into<String>, t: i64) -> Self {
        Move::Twist { target: target.into(), t }
    }

    pub fn delete(target: impl Into<String>) -> Self {
        Move::Delete { target: target.into(), delete: true }
    }

    pub fn target(&self) -> &str {
        match self {
            Move::Twist { target, .. } | Move::Delete { target, .. } => target,
        }
    }

    pub fn apply(&self, p: &SurgeryPresentation) -> Result<SurgeryPresentation, SurgeryError> {
        match self {
            Move::Twist { target, t } => p.rolfsen_twist(target, *t),
            Move::Delete { target, delete: true } => p.delete_infinity(target),
            Move::Delete { target, delete: false } => {
                Err(SurgeryError::BadScript(format!("move on {target:?} has delete: false")))
            }
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Twist { target, t } => write!(f, "twist {target} by {t:+}"),
            Move::Delete { target, .. } => write!(f, "delete {target}"),
        }
    }
}

/// Expected values after move `after` (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assertion {
    pub after: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub coeffs: BTreeMap<String, ExtendedRational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1_order: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistScript {
    pub components: Vec<SurgeryComponent>,
    pub linking: Vec<Vec<i64>>,
    #[serde(default)]
    pub moves: Vec<Move>,
    #[serde(default, rename = "assert")]
    pub assertions: Vec<Assertion>,
}

impl TwistScript {
    pub fn initial(&self) -> Result<SurgeryPresentation, SurgeryError> {
        SurgeryPresentation::new(self.components.clone(), self.linking.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub index: usize,
    pub action: String,
    pub coefficients: BTreeMap<String, ExtendedRational>,
    pub h1_order: String,
    pub checked: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScriptRun {
    pub steps: Vec<StepRecord>,
    pub result: SurgeryPresentation,
}

impl ScriptRun {
    pub fn report(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let coeffs: Vec<String> = s.coefficients.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!("[{}] {}: {} |H1|={}\n", s.index, s.action, coeffs.join(" "), s.h1_order));
            for c in &s.checked {
                out.push_str(&format!("    ok {c}\n"));
            }
        }
        out
    }
}

fn coefficients(p: &SurgeryPresentation) -> BTreeMap<String, ExtendedRational> {
    p.components().iter().map(|c| (c.id.clone(), c.coefficient)).collect()
}

fn h1_string(p: &SurgeryPresentation) -> String {
    let h = p.h1_order();
    if h == 0.into() {
        "inf".to_string()
    } else {
        h.to_string()
    }
}

/// Applies every move in order and checks each assertion right after the
/// move it names. The first failed assertion aborts the run.
pub fn run_script(script: &TwistScript) -> Result<ScriptRun, SurgeryError> {
    if let Some(a) = script.assertions.iter().find(|a| a.after >= script.moves.len()) {
        return Err(SurgeryError::BadScript(format!(
            "assertion after move {} but the script has {} moves",
            a.after,
            script.moves.len()
        )));
    }
    let mut p = script.initial()?;
    let mut steps = vec![StepRecord {
        index: 0,
        action: "initial".to_string(),
        coefficients: coefficients(&p),
        h1_order: h1_string(&p),
        checked: Vec::new(),
    }];
    for (i, m) in script.moves.iter().enumerate() {
        p = m.apply(&p)?;
        let mut checked = Vec::new();
        for a in script.assertions.iter().filter(|a| a.after == i) {
            for (id, expected) in &a.coeffs {
                let actual = p.coefficient(id)?;
                if actual != *expected {
                    return Err(SurgeryError::AssertionFailed {
                        move_index: i,
                        what: format!("coefficient of {id}"),
                        expected: expected.to_string(),
                        actual: actual.to_string(),
                    });
                }
                checked.push(format!("{id}={expected}"));
            }
            if let Some(expected) = a.h1_order {
                let actual = p.h1_order();
                if actual != expected.into() {
                    return Err(SurgeryError::AssertionFailed {
                        move_index: i,
                        what: "|H1|".to_string(),
                        expected: expected.to_string(),
                        actual: actual.to_string(),
                    });
                }
                checked.push(format!("|H1|={expected}"));
            }
        }
        steps.push(StepRecord {
            index: i + 1,
            action: m.to_string(),
            coefficients: coefficients(&p),
            h1_order: h1_string(&p),
            checked,
        });
    }
    Ok(ScriptRun { steps, result: p })
}
