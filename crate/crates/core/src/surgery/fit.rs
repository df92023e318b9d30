//! Search for linking matrices consistent with a set of twist scripts that
//! share one link.
//!
//! Entries are assigned one at a time. After each assignment every script is
//! replayed with unknown quantities left as `None`; a branch is cut as soon as
//! some assertion is fully determined and fails. Complete assignments are then
//! checked with [`run_script`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::script::{run_script, Assertion, Move, TwistScript};
use super::{SurgeryComponent, SurgeryError, SurgeryPresentation};
use crate::exec::Execution;
use crate::tangle::ExtendedRational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitComponent {
    pub id: String,
    #[serde(default = "super::yes")]
    pub unknotted: bool,
}

/// One surgery on the link: initial coefficients, moves and assertions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub label: String,
    pub coefficients: Vec<ExtendedRational>,
    pub moves: Vec<Move>,
    pub assertions: Vec<Assertion>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitProblem {
    pub components: Vec<FitComponent>,
    pub scenarios: Vec<Scenario>,
}

impl FitProblem {
    fn script(&self, s: &Scenario, linking: Vec<Vec<i64>>) -> TwistScript {
        let components = self
            .components
            .iter()
            .zip(&s.coefficients)
            .map(|(c, &coefficient)| SurgeryComponent { id: c.id.clone(), coefficient, unknotted: c.unknotted })
            .collect();
        TwistScript { components, linking, moves: s.moves.clone(), assertions: s.assertions.clone() }
    }

    fn validate(&self) -> Result<(), SurgeryError> {
        let n = self.components.len();
        for s in &self.scenarios {
            if s.coefficients.len() != n {
                return Err(SurgeryError::BadScript(format!(
                    "scenario {:?} has {} coefficients for {n} components",
                    s.label,
                    s.coefficients.len()
                )));
            }
        }
        Ok(())
    }

    fn index(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    /// Upper-triangle entries, ordered so that entries touching the earliest
    /// twisted components come first.
    fn entry_order(&self) -> Vec<(usize, usize)> {
        let n = self.components.len();
        let mut order = Vec::new();
        let push = |a: usize, b: usize, order: &mut Vec<(usize, usize)>| {
            let e = (a.min(b), a.max(b));
            if a != b && !order.contains(&e) {
                order.push(e);
            }
        };
        let longest = self.scenarios.iter().map(|s| s.moves.len()).max().unwrap_or(0);
        for k in 0..longest {
            for s in &self.scenarios {
                if let Some(Move::Twist { target, .. }) = s.moves.get(k) {
                    if let Some(u) = self.index(target) {
                        for i in 0..n {
                            push(i, u, &mut order);
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                push(i, j, &mut order);
            }
        }
        order
    }

    /// `false` when some script must fail whatever the unknown entries are.
    fn feasible(&self, lk: &[Vec<Option<i64>>]) -> bool {
        self.scenarios.iter().all(|s| self.scenario_feasible(s, lk))
    }

    fn scenario_feasible(&self, s: &Scenario, lk0: &[Vec<Option<i64>>]) -> bool {
        let n = self.components.len();
        let mut coeff: Vec<Option<ExtendedRational>> = s.coefficients.iter().copied().map(Some).collect();
        let mut lk = lk0.to_vec();
        let mut alive = vec![true; n];
        for (k, m) in s.moves.iter().enumerate() {
            let Some(u) = self.index(m.target()).filter(|&u| alive[u]) else {
                return false;
            };
            match m {
                Move::Twist { t, .. } => {
                    if !self.components[u].unknotted {
                        return false;
                    }
                    let t = *t;
                    if let Some(c) = coeff[u] {
                        let (p, q) = (c.numerator() as i128, c.denominator() as i128);
                        match ExtendedRational::from_wide(p, q + t as i128 * p) {
                            Ok(v) => coeff[u] = Some(v),
                            Err(_) => return false,
                        }
                    }
                    let lam: Vec<Option<i64>> = (0..n).map(|i| lk[i][u]).collect();
                    let before = lk.clone();
                    for i in (0..n).filter(|&i| alive[i] && i != u) {
                        coeff[i] = match (coeff[i], lam[i]) {
                            (Some(r), _) if r.is_infinite() || t == 0 => Some(r),
                            (Some(r), Some(l)) => match r.checked_add(&ExtendedRational::integer(t * l * l)) {
                                Ok(v) => Some(v),
                                Err(_) => return false,
                            },
                            _ => None,
                        };
                        for j in (0..n).filter(|&j| alive[j] && j != u && j != i) {
                            lk[i][j] = match (before[i][j], lam[i], lam[j]) {
                                (Some(x), Some(a), Some(b)) => Some(x + t * a * b),
                                (Some(x), Some(0), _) | (Some(x), _, Some(0)) => Some(x),
                                (Some(x), _, _) if t == 0 => Some(x),
                                _ => None,
                            };
                        }
                    }
                }
                Move::Delete { delete, .. } => {
                    if !delete || matches!(coeff[u], Some(c) if !c.is_infinite()) {
                        return false;
                    }
                    alive[u] = false;
                }
            }
            for a in s.assertions.iter().filter(|a| a.after == k) {
                for (id, expected) in &a.coeffs {
                    let Some(i) = self.index(id).filter(|&i| alive[i]) else {
                        return false;
                    };
                    if matches!(coeff[i], Some(c) if c != *expected) {
                        return false;
                    }
                }
                if let Some(expected) = a.h1_order {
                    if let Some(h) = partial_h1(&coeff, &lk, &alive) {
                        if h != expected.into() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn accepts(&self, linking: &[Vec<i64>]) -> bool {
        self.scenarios.iter().all(|s| run_script(&self.script(s, linking.to_vec())).is_ok())
    }
}

fn partial_h1(
    coeff: &[Option<ExtendedRational>],
    lk: &[Vec<Option<i64>>],
    alive: &[bool],
) -> Option<num_bigint::BigInt> {
    let idx: Vec<usize> = (0..alive.len()).filter(|&i| alive[i]).collect();
    let mut components = Vec::new();
    for &i in &idx {
        components.push(SurgeryComponent::new(format!("{i}"), coeff[i]?));
    }
    let mut linking = Vec::new();
    for &i in &idx {
        let mut row = Vec::new();
        for &j in &idx {
            row.push(if i == j { 0 } else { lk[i][j]? });
        }
        linking.push(row);
    }
    SurgeryPresentation::new(components, linking).ok().map(|p| p.h1_order())
}

/// Every symmetric linking matrix with entries in `[-bound, bound]` under
/// which all scenarios of `problem` run without a failed assertion,
/// sorted by their upper triangles.
pub fn fit_linking_matrix(
    problem: &FitProblem,
    bound: i64,
    exec: Execution,
) -> Result<Vec<Vec<Vec<i64>>>, SurgeryError> {
    problem.validate()?;
    let n = problem.components.len();
    let order = problem.entry_order();
    if order.is_empty() {
        let m = vec![vec![0; n]; n];
        return Ok(if problem.accepts(&m) { vec![m] } else { Vec::new() });
    }
    let first: Vec<i64> = (-bound..=bound).collect();
    let chunks = exec.map(&first, |&v| {
        let mut lk = vec![vec![None; n]; n];
        let (a, b) = order[0];
        lk[a][b] = Some(v);
        lk[b][a] = Some(v);
        let mut found = Vec::new();
        if problem.feasible(&lk) {
            search(problem, &order, 1, bound, &mut lk, &mut found);
        }
        found
    });
    let mut all: Vec<Vec<Vec<i64>>> = chunks.into_iter().flatten().collect();
    all.sort_by_key(|m| upper_triangle(m));
    Ok(all)
}

fn search(
    problem: &FitProblem,
    order: &[(usize, usize)],
    level: usize,
    bound: i64,
    lk: &mut Vec<Vec<Option<i64>>>,
    found: &mut Vec<Vec<Vec<i64>>>,
) {
    if level == order.len() {
        let m: Vec<Vec<i64>> = lk.iter().map(|row| row.iter().map(|x| x.unwrap_or(0)).collect()).collect();
        if problem.accepts(&m) {
            found.push(m);
        }
        return;
    }
    let (a, b) = order[level];
    for v in -bound..=bound {
        lk[a][b] = Some(v);
        lk[b][a] = Some(v);
        if problem.feasible(lk) {
            search(problem, order, level + 1, bound, lk, found);
        }
    }
    lk[a][b] = None;
    lk[b][a] = None;
}

fn upper_triangle(m: &[Vec<i64>]) -> Vec<i64> {
    let n = m.len();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| m[i][j]).collect()
}

/// Reversing the orientation of a component negates its row and column.
/// Returns one representative per orientation class: the matrix whose upper
/// triangle is lexicographically largest.
pub fn orientation_classes(solutions: &[Vec<Vec<i64>>]) -> Vec<Vec<Vec<i64>>> {
    let mut reps = BTreeSet::new();
    for m in solutions {
        let n = m.len();
        let best = (0..1u32 << n.saturating_sub(1))
            .map(|mask| {
                let sign = |i: usize| if i > 0 && mask >> (i - 1) & 1 == 1 { -1 } else { 1 };
                let flipped: Vec<Vec<i64>> =
                    (0..n).map(|i| (0..n).map(|j| m[i][j] * sign(i) * sign(j)).collect()).collect();
                (upper_triangle(&flipped), flipped)
            })
            .max()
            .expect("at least one sign vector");
        reps.insert(best);
    }
    reps.into_iter().map(|(_, m)| m).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> ExtendedRational {
        s.parse().unwrap()
    }

    fn comps(n: usize) -> Vec<FitComponent> {
        (0..n).map(|i| FitComponent { id: format!("C{i}"), unknotted: true }).collect()
    }

    #[test]
    fn recovers_a_two_component_matrix() {
        // Twisting C0 = -1 by +1 sends it to ∞ and adds lk² to C1.
        let problem = FitProblem {
            components: comps(2),
            scenarios: vec![Scenario {
                label: "x".into(),
                coefficients: vec![r("-1"), r("1/2")],
                moves: vec![Move::twist("C0", 1), Move::delete("C0")],
                assertions: vec![Assertion { after: 0, coeffs: [("C1".to_string(), r("9/2"))].into(), h1_order: None }],
            }],
        };
        let seq = fit_linking_matrix(&problem, 10, Execution::Sequential).unwrap();
        let par = fit_linking_matrix(&problem, 10, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq, vec![vec![vec![0, -2], vec![-2, 0]], vec![vec![0, 2], vec![2, 0]]]);
        assert_eq!(orientation_classes(&seq), vec![vec![vec![0, 2], vec![2, 0]]]);
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        let problem = FitProblem {
            components: comps(3),
            scenarios: vec![Scenario {
                label: "y".into(),
                coefficients: vec![r("5/2"), r("1/2"), r("-1")],
                moves: vec![Move::twist("C2", 1)],
                assertions: vec![Assertion {
                    after: 0,
                    coeffs: [("C0".to_string(), r("23/2")), ("C1".to_string(), r("19/2"))].into(),
                    h1_order: None,
                }],
            }],
        };
        let fitted = fit_linking_matrix(&problem, 4, Execution::default()).unwrap();
        let mut brute = Vec::new();
        for a in -4..=4 {
            for b in -4..=4 {
                for c in -4..=4 {
                    let m = vec![vec![0, a, b], vec![a, 0, c], vec![b, c, 0]];
                    if problem.accepts(&m) {
                        brute.push(m);
                    }
                }
            }
        }
        brute.sort_by_key(|m| upper_triangle(m));
        assert_eq!(fitted, brute);
        assert_eq!(fitted.len(), 4 * 9);
    }
}
