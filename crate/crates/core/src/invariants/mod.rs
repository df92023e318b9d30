//! Invariants of braid closures: component count, reduced Burau matrix,
//! Alexander and Jones polynomials, determinant and the genus of positive
//! braid closures.

mod laurent;
mod tl;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::braid::BraidWord;

pub use laurent::LaurentPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("closure has {0} components, expected a knot")]
    NotAKnot(usize),
    #[error("word has a negative letter; genus formula needs a positive braid")]
    NotPositive,
    #[error("B_{0} has no reduced Burau representation")]
    TooFewStrands(usize),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("internal arithmetic error: {0}")]
    Internal(String),
}

pub fn closure_component_count(w: &BraidWord) -> usize {
    w.permutation().cycle_count()
}

fn require_knot(w: &BraidWord) -> Result<(), InvariantError> {
    match closure_component_count(w) {
        1 => Ok(()),
        c => Err(InvariantError::NotAKnot(c)),
    }
}

/// Square matrix of Laurent polynomials in `t`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    dim: usize,
    entries: Vec<LaurentPolynomial>,
}

impl LaurentMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![LaurentPolynomial::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = LaurentPolynomial::one();
        }
        LaurentMatrix { dim, entries }
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPolynomial>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        LaurentMatrix { dim, entries: rows.into_iter().flatten().collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &LaurentPolynomial {
        &self.entries[row * self.dim + col]
    }

    fn get_mut(&mut self, row: usize, col: usize) -> &mut LaurentPolynomial {
        &mut self.entries[row * self.dim + col]
    }

    pub fn mul(&self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = LaurentMatrix { dim: n, entries: vec![LaurentPolynomial::zero(); n * n] };
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let p = a * rhs.get(k, j);
                    let e = out.get_mut(i, j);
                    *e = &*e + &p;
                }
            }
        }
        out
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> LaurentPolynomial {
        let n = self.dim;
        if n == 0 {
            return LaurentPolynomial::one();
        }
        let mut m = self.entries.clone();
        let mut sign = 1i64;
        let mut prev = LaurentPolynomial::one();
        for k in 0..n {
            if m[k * n + k].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !m[r * n + k].is_zero()) else {
                    return LaurentPolynomial::zero();
                };
                for j in 0..n {
                    m.swap(k * n + j, r * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[i * n + j] * &m[k * n + k]) - &(&m[i * n + k] * &m[k * n + j]);
                    m[i * n + j] = num.exact_div(&prev).expect("Bareiss division is exact");
                }
            }
            prev = m[k * n + k].clone();
        }
        let det = m[n * n - 1].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }
}

impl fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<&LaurentPolynomial>> =
            (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j)).collect()).collect();
        f.debug_list().entries(rows).finish()
    }
}

/// Reduced Burau image of `w`, an `(n-1)×(n-1)` matrix over `Z[t, t⁻¹]`.
pub fn reduced_burau(w: &BraidWord) -> Result<LaurentMatrix, InvariantError> {
    let n = w.strands();
    if n < 2 {
        return Err(InvariantError::TooFewStrands(n));
    }
    let dim = n - 1;
    let t = LaurentPolynomial::monomial(1, 1);
    let t_inv = LaurentPolynomial::monomial(1, -1);
    let minus_t = -&t;
    let minus_t_inv = -&t_inv;
    let mut m = LaurentMatrix::identity(dim);
    for &l in w.letters() {
        // Right-multiplying by a generator matrix only rewrites column k.
        let k = l.unsigned_abs() as usize - 1;
        let (left, mid, right) = if l > 0 {
            (&t, &minus_t, &LaurentPolynomial::one())
        } else {
            (&LaurentPolynomial::one(), &minus_t_inv, &t_inv)
        };
        for row in 0..dim {
            let mut v = m.get(row, k) * mid;
            if k >= 1 {
                v = &v + &(m.get(row, k - 1) * left);
            }
            if k + 1 < dim {
                v = &v + &(m.get(row, k + 1) * right);
            }
            *m.get_mut(row, k) = v;
        }
    }
    Ok(m)
}

/// Alexander polynomial of a knot closure, normalized so that
/// `Δ(t) = Δ(t⁻¹)` and `Δ(1) = 1`.
pub fn alexander(w: &BraidWord) -> Result<LaurentPolynomial, InvariantError> {
    require_knot(w)?;
    let n = w.strands();
    if n == 1 {
        return Ok(LaurentPolynomial::one());
    }
    let b = reduced_burau(w)?;
    let dim = b.dim();
    let mut ib = LaurentMatrix::identity(dim);
    for i in 0..dim {
        for j in 0..dim {
            let e = ib.get_mut(i, j);
            *e = &*e - b.get(i, j);
        }
    }
    let det = ib.determinant();
    let one_minus_t = LaurentPolynomial::from_terms([(0, 1), (1, -1)]);
    let one_minus_tn = LaurentPolynomial::from_terms([(0, 1), (n as i64, -1)]);
    let raw = (&det * &one_minus_t)
        .exact_div(&one_minus_tn)
        .ok_or_else(|| InvariantError::Internal("(1 - t^n)/(1 - t) does not divide".into()))?;
    normalize_alexander(&raw)
}

fn normalize_alexander(p: &LaurentPolynomial) -> Result<LaurentPolynomial, InvariantError> {
    let (lo, hi) = match (p.min_degree(), p.max_degree()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(InvariantError::Internal("Alexander polynomial vanished".into())),
    };
    if (lo + hi) % 2 != 0 {
        return Err(InvariantError::Internal("Alexander polynomial has odd span".into()));
    }
    let mut q = p.shift(-(lo + hi) / 2);
    let at_one = q.eval_one();
    if at_one == -BigInt::one() {
        q = -q;
    } else if !at_one.is_one() {
        return Err(InvariantError::Internal(format!("Δ(1) = {at_one}")));
    }
    if !q.is_symmetric() {
        return Err(InvariantError::Internal("Alexander polynomial is not symmetric".into()));
    }
    Ok(q)
}

/// `|Δ(-1)|` for a knot closure.
pub fn determinant(w: &BraidWord) -> Result<BigInt, InvariantError> {
    Ok(alexander(w)?.eval_minus_one().abs())
}

/// Jones polynomial, stored with exponents counted in units of `t^{1/2}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct JonesPolynomial {
    half: LaurentPolynomial,
}

impl JonesPolynomial {
    /// The polynomial in `t^{1/2}`.
    pub fn in_half_powers(&self) -> &LaurentPolynomial {
        &self.half
    }

    /// The polynomial in `t`, when every exponent is an integer (always for knots).
    pub fn in_t(&self) -> Option<LaurentPolynomial> {
        self.half.compress_exponents(2)
    }

    /// `t ↦ t⁻¹`, the Jones polynomial of the mirror.
    pub fn mirrored(&self) -> JonesPolynomial {
        JonesPolynomial { half: self.half.invert_variable() }
    }

    /// `V(-1)` when the exponents are integral.
    pub fn at_minus_one(&self) -> Option<BigInt> {
        self.in_t().map(|p| p.eval_minus_one())
    }
}

/// Exponents print as multiples of `t`, halves as `k/2`.
impl fmt::Display for JonesPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.in_t() {
            return write!(f, "{p}");
        }
        write!(f, "{{")?;
        for (k, (e, c)) in self.half.terms().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}/2:{c}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for JonesPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Jones polynomial of the closure, computed in `TL_n` crossing by crossing.
///
/// The convention has `V(unknot) = 1` and `[1,1,1] ∈ B_2` giving
/// `-t⁻⁴ + t⁻³ + t⁻¹`, i.e. `t = A⁴`.
pub fn jones(w: &BraidWord) -> JonesPolynomial {
    let algebra = tl::TemperleyLieb::new(w.strands());
    jones_in(&algebra, w)
}

fn jones_in(algebra: &tl::TemperleyLieb, w: &BraidWord) -> JonesPolynomial {
    let bracket = algebra.closed_bracket(w.letters());
    let f = &tl::writhe_correction(w.exponent_sum()) * &bracket;
    let half = f
        .compress_exponents(2)
        .expect("normalized bracket has even exponents in A");
    JonesPolynomial { half }
}

/// Evaluates Jones polynomials for many words on the same strand count,
/// reusing the Temperley–Lieb tables.
pub struct JonesEvaluator {
    algebra: tl::TemperleyLieb,
}

impl JonesEvaluator {
    pub fn new(strands: usize) -> Self {
        JonesEvaluator { algebra: tl::TemperleyLieb::new(strands) }
    }

    pub fn strands(&self) -> usize {
        self.algebra.strands()
    }

    pub fn jones(&self, w: &BraidWord) -> JonesPolynomial {
        assert_eq!(w.strands(), self.strands(), "strand count mismatch");
        jones_in(&self.algebra, w)
    }
}

/// Genus of the closure of a positive braid with `crossings` letters on
/// `strands` strands, `(c - n + 1)/2`.
pub fn positive_braid_genus(crossings: usize, strands: usize) -> Result<u64, InvariantError> {
    let twice = crossings as i64 - strands as i64 + 1;
    if twice < 0 || twice % 2 != 0 {
        return Err(InvariantError::Inconsistent(format!(
            "(c - n + 1) = {twice} is not a nonnegative even number"
        )));
    }
    Ok((twice / 2) as u64)
}

pub fn genus_positive_braid(w: &BraidWord) -> Result<u64, InvariantError> {
    if !w.is_positive() {
        return Err(InvariantError::NotPositive);
    }
    require_knot(w)?;
    positive_braid_genus(w.len(), w.strands())
}

/// Necessary condition on the Alexander polynomial of an L-space knot:
/// nonzero coefficients are ±1, alternate in sign, and the top one is +1.
pub fn is_lspace_alexander_form(p: &LaurentPolynomial) -> bool {
    if !p.is_symmetric() || !p.eval_one().is_one() {
        return false;
    }
    let coeffs: Vec<&BigInt> = p.terms().map(|(_, c)| c).collect();
    if coeffs.iter().any(|c| c.abs() != BigInt::one()) {
        return false;
    }
    let Some(top) = coeffs.last() else { return false };
    if !top.is_positive() {
        return false;
    }
    coeffs.windows(2).all(|w| w[0].is_positive() != w[1].is_positive())
}

/// Degree of a symmetrized Alexander polynomial: its top exponent.
pub fn alexander_degree(p: &LaurentPolynomial) -> i64 {
    p.max_degree().unwrap_or(0)
}
