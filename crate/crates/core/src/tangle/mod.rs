//! Rational tangles as subtractive continued fractions, the Montesinos-trick
//! tangle fraction, and determinants of Montesinos links.
//!
//! `[a_1, …, a_k]` denotes `a_1 - 1/(a_2 - 1/(⋯ - 1/a_k))`.

mod rational;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

pub use rational::ExtendedRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TangleError {
    #[error("0/0 is not an extended rational")]
    ZeroOverZero,
    #[error("operation needs a finite value")]
    Infinite,
    #[error("integer overflow")]
    Overflow,
    #[error("continued fraction divides by zero at term {0}")]
    DivisionByZero(usize),
    #[error("continued fraction has no terms")]
    Empty,
    #[error("Montesinos fraction {0} needs a denominator ≥ 2")]
    BadMontesinosFraction(ExtendedRational),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuedFraction {
    terms: Vec<i64>,
}

impl ContinuedFraction {
    pub fn new(terms: Vec<i64>) -> Result<Self, TangleError> {
        if terms.is_empty() {
            return Err(TangleError::Empty);
        }
        Ok(ContinuedFraction { terms })
    }

    pub fn terms(&self) -> &[i64] {
        &self.terms
    }

    /// Evaluates from the innermost term outwards.
    pub fn value(&self) -> Result<ExtendedRational, TangleError> {
        let last = self.terms.len() - 1;
        let mut v = ExtendedRational::integer(self.terms[last]);
        for (k, &a) in self.terms[..last].iter().enumerate().rev() {
            if v.numerator() == 0 {
                return Err(TangleError::DivisionByZero(k + 1));
            }
            v = ExtendedRational::integer(a).checked_sub(&v.recip())?;
        }
        Ok(v)
    }

    /// Greedy expansion with ceiling terms; every later term is at least 2.
    pub fn expand(r: ExtendedRational) -> Result<Self, TangleError> {
        if r.is_infinite() {
            return Err(TangleError::Infinite);
        }
        let mut terms = Vec::new();
        let mut x = r;
        loop {
            let a = x.ceil()?;
            terms.push(a);
            let rest = ExtendedRational::integer(a).checked_sub(&x)?;
            if rest.numerator() == 0 {
                return ContinuedFraction::new(terms);
            }
            x = rest.recip();
        }
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Parses `[6,-2]`; the brackets are optional.
impl FromStr for ContinuedFraction {
    type Err = TangleError;

    fn from_str(s: &str) -> Result<Self, TangleError> {
        let inner = s.trim();
        let inner = inner.strip_prefix('[').unwrap_or(inner);
        let inner = inner.strip_suffix(']').unwrap_or(inner);
        let terms = inner
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| TangleError::Parse(format!("bad term {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        ContinuedFraction::new(terms)
    }
}

pub fn cf_value(c: &ContinuedFraction) -> Result<ExtendedRational, TangleError> {
    c.value()
}

pub fn cf_expand(r: ExtendedRational) -> Result<ContinuedFraction, TangleError> {
    ContinuedFraction::expand(r)
}

/// Fraction of the rational tangle that replaces the quotient arc of a
/// surgery component: the surgery coefficient minus the component's writhe.
pub fn montesinos_trick_fraction(
    coefficient: ExtendedRational,
    writhe: i64,
) -> Result<ExtendedRational, TangleError> {
    coefficient.checked_sub(&ExtendedRational::integer(writhe))
}

/// A Montesinos link `(β_1/α_1, …, β_r/α_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MontesinosPresentation {
    fractions: Vec<ExtendedRational>,
}

impl MontesinosPresentation {
    pub fn new(fractions: Vec<ExtendedRational>) -> Result<Self, TangleError> {
        if let Some(bad) = fractions.iter().find(|f| f.is_infinite() || f.denominator() < 2) {
            return Err(TangleError::BadMontesinosFraction(*bad));
        }
        Ok(MontesinosPresentation { fractions })
    }

    pub fn fractions(&self) -> &[ExtendedRational] {
        &self.fractions
    }

    /// `|∏α_i · Σ β_i/α_i|`, the order of `H_1` of the double branched
    /// cover (0 when infinite).
    pub fn determinant(&self) -> BigInt {
        let mut total = BigInt::from(0);
        for (i, f) in self.fractions.iter().enumerate() {
            let mut term = BigInt::from(f.numerator());
            for (j, g) in self.fractions.iter().enumerate() {
                if i != j {
                    term *= g.denominator();
                }
            }
            total += term;
        }
        total.abs()
    }

    pub fn mirror(&self) -> Self {
        MontesinosPresentation { fractions: self.fractions.iter().map(|f| f.neg()).collect() }
    }
}

/// Comma-separated fractions, e.g. `3/5,2/3,-1/4`, optionally in parentheses.
impl FromStr for MontesinosPresentation {
    type Err = TangleError;

    fn from_str(s: &str) -> Result<Self, TangleError> {
        let inner = s.trim();
        let inner = inner.strip_prefix('(').unwrap_or(inner);
        let inner = inner.strip_suffix(')').unwrap_or(inner);
        let fractions = inner.split(',').map(str::parse).collect::<Result<Vec<_>, _>>()?;
        MontesinosPresentation::new(fractions)
    }
}

impl fmt::Display for MontesinosPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.fractions.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn montesinos_determinant(m: &MontesinosPresentation) -> BigInt {
    m.determinant()
}
