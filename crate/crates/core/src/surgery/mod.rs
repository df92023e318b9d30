//! Rational surgery diagrams on links in S³, Rolfsen twists on unknotted
//! components, and the order of the first homology of the surgered manifold.

mod fit;
mod script;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tangle::{ExtendedRational, TangleError};

pub use fit::{fit_linking_matrix, orientation_classes, FitComponent, FitProblem, Scenario};
pub use script::{run_script, Assertion, Move, ScriptRun, StepRecord, TwistScript};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("no component named {0:?}")]
    UnknownComponent(String),
    #[error("component {0:?} is listed twice")]
    DuplicateComponent(String),
    #[error("component {0:?} is not unknotted; a Rolfsen twist needs an unknot")]
    NotUnknotted(String),
    #[error("component {id:?} has coefficient {coefficient}, only ∞-components can be deleted")]
    NotInfinite { id: String, coefficient: ExtendedRational },
    #[error("linking matrix: {0}")]
    BadLinking(String),
    #[error("script: {0}")]
    BadScript(String),
    #[error("arithmetic: {0}")]
    Arithmetic(#[from] TangleError),
    #[error("after move {move_index}: {what} expected {expected}, got {actual}")]
    AssertionFailed { move_index: usize, what: String, expected: String, actual: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryComponent {
    pub id: String,
    #[serde(rename = "coeff")]
    pub coefficient: ExtendedRational,
    #[serde(default = "yes")]
    pub unknotted: bool,
}

fn yes() -> bool {
    true
}

impl SurgeryComponent {
    pub fn new(id: impl Into<String>, coefficient: ExtendedRational) -> Self {
        SurgeryComponent { id: id.into(), coefficient, unknotted: true }
    }
}

/// Components with surgery coefficients and a symmetric linking matrix
/// with zero diagonal, indexed like `components`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryPresentation {
    components: Vec<SurgeryComponent>,
    linking: Vec<Vec<i64>>,
}

impl SurgeryPresentation {
    pub fn new(components: Vec<SurgeryComponent>, linking: Vec<Vec<i64>>) -> Result<Self, SurgeryError> {
        let n = components.len();
        let mut seen = HashSet::new();
        for c in &components {
            if !seen.insert(c.id.as_str()) {
                return Err(SurgeryError::DuplicateComponent(c.id.clone()));
            }
        }
        if linking.len() != n || linking.iter().any(|row| row.len() != n) {
            return Err(SurgeryError::BadLinking(format!("expected a {n}×{n} matrix")));
        }
        for i in 0..n {
            if linking[i][i] != 0 {
                return Err(SurgeryError::BadLinking(format!("diagonal entry {i} is nonzero")));
            }
            for j in 0..i {
                if linking[i][j] != linking[j][i] {
                    return Err(SurgeryError::BadLinking(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Ok(SurgeryPresentation { components, linking })
    }

    pub fn components(&self) -> &[SurgeryComponent] {
        &self.components
    }

    pub fn linking(&self) -> &[Vec<i64>] {
        &self.linking
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Result<usize, SurgeryError> {
        self.components
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| SurgeryError::UnknownComponent(id.to_string()))
    }

    pub fn coefficient(&self, id: &str) -> Result<ExtendedRational, SurgeryError> {
        Ok(self.components[self.index_of(id)?].coefficient)
    }

    pub fn linking_number(&self, a: &str, b: &str) -> Result<i64, SurgeryError> {
        Ok(self.linking[self.index_of(a)?][self.index_of(b)?])
    }

    /// A `t`-fold Rolfsen twist along the unknotted component `id`.
    ///
    /// With `p/q` on the twisted component and `λ_i = lk(C_i, C_u)`:
    /// the twisted coefficient becomes `p/(q + tp)`, every other `r_i`
    /// becomes `r_i + tλ_i²`, and `lk(C_i, C_j)` gains `tλ_iλ_j`.
    pub fn rolfsen_twist(&self, id: &str, t: i64) -> Result<Self, SurgeryError> {
        let u = self.index_of(id)?;
        if !self.components[u].unknotted {
            return Err(SurgeryError::NotUnknotted(id.to_string()));
        }
        let n = self.len();
        let lam: Vec<i64> = (0..n).map(|i| self.linking[i][u]).collect();
        let mut out = self.clone();
        let cu = self.components[u].coefficient;
        let (p, q) = (cu.numerator() as i128, cu.denominator() as i128);
        out.components[u].coefficient = ExtendedRational::from_wide(p, q + t as i128 * p)?;
        for i in (0..n).filter(|&i| i != u) {
            let r = self.components[i].coefficient;
            if !r.is_infinite() {
                let shift = checked_product(&[t, lam[i], lam[i]])?;
                out.components[i].coefficient = r.checked_add(&ExtendedRational::integer(shift))?;
            }
            for j in (0..n).filter(|&j| j != u && j != i) {
                let shift = checked_product(&[t, lam[i], lam[j]])?;
                out.linking[i][j] = self.linking[i][j].checked_add(shift).ok_or(TangleError::Overflow)?;
            }
        }
        Ok(out)
    }

    /// Removes a component with coefficient ∞.
    pub fn delete_infinity(&self, id: &str) -> Result<Self, SurgeryError> {
        let u = self.index_of(id)?;
        let c = &self.components[u];
        if !c.coefficient.is_infinite() {
            return Err(SurgeryError::NotInfinite { id: c.id.clone(), coefficient: c.coefficient });
        }
        let mut out = self.clone();
        out.components.remove(u);
        out.linking.remove(u);
        for row in &mut out.linking {
            row.remove(u);
        }
        Ok(out)
    }

    /// The presentation matrix of `H_1`: row `i` is `p_i μ_i + q_i Σ_j lk(i,j) μ_j`.
    pub fn h1_matrix(&self) -> Vec<Vec<BigInt>> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let c = self.components[i].coefficient;
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigInt::from(c.numerator())
                        } else {
                            BigInt::from(c.denominator()) * self.linking[i][j]
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `|H_1|`, with 0 standing for an infinite group.
    pub fn h1_order(&self) -> BigInt {
        determinant(self.h1_matrix()).abs()
    }
}

fn checked_product(xs: &[i64]) -> Result<i64, TangleError> {
    xs.iter().try_fold(1i64, |acc, &x| acc.checked_mul(x)).ok_or(TangleError::Overflow)
}

/// Fraction-free Gaussian elimination.
pub(crate) fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    &m[n - 1][n - 1] * sign
}

pub fn rolfsen_twist(p: &SurgeryPresentation, id: &str, t: i64) -> Result<SurgeryPresentation, SurgeryError> {
    p.rolfsen_twist(id, t)
}

pub fn delete_infinity(p: &SurgeryPresentation, id: &str) -> Result<SurgeryPresentation, SurgeryError> {
    p.delete_infinity(id)
}

pub fn h1_order(p: &SurgeryPresentation) -> BigInt {
    p.h1_order()
}
