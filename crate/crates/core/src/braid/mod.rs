//! Words in the Artin braid group `B_n`.
//!
//! Letters are signed, 1-indexed generator numbers: `i` is `σ_i` and `-i` is
//! `σ_i⁻¹`. Every operation here is a pure function on immutable words.

mod expr;
mod garside;
mod handle;
mod perm;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use expr::{expand, parse_letters};
pub use garside::NormalForm;
pub use perm::Permutation;

/// Elementary reduction steps allowed before the word problem gives up.
pub const DEFAULT_STEP_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("strand counts differ: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("letter {letter} is out of range for B_{strands}")]
    LetterOutOfRange { letter: i32, strands: usize },
    #[error("B_{0} needs at least {1} strands here")]
    TooFewStrands(usize, usize),
    #[error("cannot destabilize: {0}")]
    Destabilize(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("word problem undecided after {0} reduction steps")]
    StepCapExceeded(u64),
}

/// Which algorithm decides triviality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WordProblemMethod {
    /// Dehornoy handle reduction.
    #[default]
    HandleReduction,
    /// Left-greedy Garside normal form.
    NormalForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordProblem {
    pub method: WordProblemMethod,
    pub step_cap: u64,
}

impl Default for WordProblem {
    fn default() -> Self {
        WordProblem { method: WordProblemMethod::HandleReduction, step_cap: DEFAULT_STEP_CAP }
    }
}

impl WordProblem {
    pub fn with_method(method: WordProblemMethod) -> Self {
        WordProblem { method, ..Default::default() }
    }

    pub fn is_trivial(&self, w: &BraidWord) -> Result<bool, BraidError> {
        match self.method {
            WordProblemMethod::HandleReduction => handle::is_trivial(w, self.step_cap),
            WordProblemMethod::NormalForm => Ok(NormalForm::of(w).is_identity()),
        }
    }

    /// Group equality, with the permutation and exponent sum as cheap filters.
    pub fn equals(&self, u: &BraidWord, v: &BraidWord) -> Result<bool, BraidError> {
        check_strands(u, v)?;
        if u.exponent_sum() != v.exponent_sum() || u.permutation() != v.permutation() {
            return Ok(false);
        }
        self.is_trivial(&u.compose(&v.inverse())?)
    }
}

/// A braid word on `strands` strands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

fn check_strands(u: &BraidWord, v: &BraidWord) -> Result<(), BraidError> {
    if u.strands != v.strands {
        return Err(BraidError::StrandMismatch(u.strands, v.strands));
    }
    Ok(())
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::TooFewStrands(strands, 1));
        }
        if let Some(&bad) = letters
            .iter()
            .find(|&&l| l == 0 || l.unsigned_abs() as usize >= strands)
        {
            return Err(BraidError::LetterOutOfRange { letter: bad, strands });
        }
        Ok(BraidWord { strands, letters })
    }

    /// The empty word in `B_n`.
    pub fn identity(strands: usize) -> Self {
        assert!(strands >= 1);
        BraidWord { strands, letters: Vec::new() }
    }

    /// Parses the bracket-free text syntax, e.g. `(1,2,3)^8,-2,-1`.
    pub fn parse(strands: usize, text: &str) -> Result<Self, BraidError> {
        BraidWord::new(strands, expand(text)?)
    }

    // Letters are validated once at construction, so derived words skip it.
    fn from_raw(strands: usize, letters: Vec<i32>) -> Self {
        BraidWord { strands, letters }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn compose(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        check_strands(self, other)?;
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord::from_raw(self.strands, letters))
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord::from_raw(self.strands, self.letters.iter().rev().map(|l| -l).collect())
    }

    /// Cancels adjacent `ℓ, -ℓ` pairs until none remain.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<i32> = Vec::with_capacity(self.len());
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord::from_raw(self.strands, out)
    }

    /// `a⁻¹ · self · a`, letter for letter.
    pub fn conjugate(&self, a: &BraidWord) -> Result<BraidWord, BraidError> {
        a.inverse().compose(self)?.compose(a)
    }

    /// Renames `σ_i` to `σ_{n-i}`; this is conjugation by the half twist.
    pub fn flip(&self) -> BraidWord {
        let n = self.strands as i32;
        BraidWord::from_raw(
            self.strands,
            self.letters.iter().map(|&l| l.signum() * (n - l.abs())).collect(),
        )
    }

    pub fn mirror(&self) -> BraidWord {
        BraidWord::from_raw(self.strands, self.letters.iter().map(|l| -l).collect())
    }

    pub fn reverse(&self) -> BraidWord {
        BraidWord::from_raw(self.strands, self.letters.iter().rev().copied().collect())
    }

    /// `(σ_1 ⋯ σ_{n-1})^{n·k}`, i.e. `k` full twists.
    pub fn full_twist(strands: usize, k: i64) -> Result<BraidWord, BraidError> {
        if strands < 2 {
            return Err(BraidError::TooFewStrands(strands, 2));
        }
        let base: Vec<i32> = (1..strands as i32).collect();
        let reps = strands * k.unsigned_abs() as usize;
        let mut letters = Vec::with_capacity(base.len() * reps);
        for _ in 0..reps {
            letters.extend_from_slice(&base);
        }
        let w = BraidWord::from_raw(strands, letters);
        Ok(if k < 0 { w.inverse() } else { w })
    }

    /// The Garside half twist `Δ = σ_1(σ_2σ_1)⋯(σ_{n-1}⋯σ_1)`.
    pub fn half_twist(strands: usize) -> BraidWord {
        let mut letters = Vec::new();
        for top in 1..strands as i32 {
            letters.extend((1..=top).rev());
        }
        BraidWord::from_raw(strands, letters)
    }

    pub fn permutation(&self) -> Permutation {
        let mut p = Permutation::identity(self.strands);
        for &l in &self.letters {
            p.swap_positions(l.unsigned_abs() as usize - 1);
        }
        p
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.signum() as i64).sum()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|&l| l > 0)
    }

    /// Appends `σ_n` and moves to `B_{n+1}`.
    pub fn stabilize(&self) -> BraidWord {
        let mut letters = self.letters.clone();
        letters.push(self.strands as i32);
        BraidWord::from_raw(self.strands + 1, letters)
    }

    /// Removes a trailing `σ_{n-1}^{±1}` that is the only occurrence of that generator.
    pub fn destabilize(&self) -> Result<BraidWord, BraidError> {
        if self.strands < 2 {
            return Err(BraidError::TooFewStrands(self.strands, 2));
        }
        let top = self.strands as i32 - 1;
        let count = self.letters.iter().filter(|l| l.abs() == top).count();
        if count != 1 {
            return Err(BraidError::Destabilize(format!(
                "generator {top} occurs {count} times, expected exactly once"
            )));
        }
        if self.letters.last().map(|l| l.abs()) != Some(top) {
            return Err(BraidError::Destabilize(format!("generator {top} is not the last letter")));
        }
        let letters = self.letters[..self.len() - 1].to_vec();
        Ok(BraidWord::from_raw(self.strands - 1, letters))
    }

    pub fn is_trivial(&self) -> Result<bool, BraidError> {
        WordProblem::default().is_trivial(self)
    }

    pub fn equals(&self, other: &BraidWord) -> Result<bool, BraidError> {
        WordProblem::default().equals(self, other)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}
