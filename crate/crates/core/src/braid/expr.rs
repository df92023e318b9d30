//! Text syntax for braid words: `(1,2,3)^8,-2,-2,-1,3,2,-1,-1`.
//!
//! Items are signed integers or parenthesized groups; a group may carry a
//! signed exponent, and a negative exponent repeats the inverse of the
//! group. Whitespace is ignored and one optional pair of outer square
//! brackets is accepted.

use super::BraidError;

/// Flattens a word expression into its letter sequence.
pub fn expand(text: &str) -> Result<Vec<i32>, BraidError> {
    parse_letters(text)
}

pub fn parse_letters(text: &str) -> Result<Vec<i32>, BraidError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    let bracketed = p.eat(b'[');
    let letters = p.list(if bracketed { Some(b']') } else { None })?;
    if bracketed && !p.eat(b']') {
        return Err(p.error("expected ']'"));
    }
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(letters)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> BraidError {
        BraidError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn list(&mut self, close: Option<u8>) -> Result<Vec<i32>, BraidError> {
        let mut out = Vec::new();
        if self.peek().is_none() || self.peek() == close {
            return Ok(out);
        }
        loop {
            self.item(&mut out)?;
            if !self.eat(b',') {
                return Ok(out);
            }
        }
    }

    fn item(&mut self, out: &mut Vec<i32>) -> Result<(), BraidError> {
        if self.eat(b'(') {
            let group = self.list(Some(b')'))?;
            if !self.eat(b')') {
                return Err(self.error("expected ')'"));
            }
            let exp = if self.eat(b'^') { self.integer()? } else { 1 };
            if exp >= 0 {
                for _ in 0..exp {
                    out.extend_from_slice(&group);
                }
            } else {
                let inv: Vec<i32> = group.iter().rev().map(|l| -l).collect();
                for _ in 0..exp.unsigned_abs() {
                    out.extend_from_slice(&inv);
                }
            }
            Ok(())
        } else {
            let start = self.pos;
            let v = self.integer()?;
            let letter = i32::try_from(v)
                .ok()
                .filter(|&l| l != 0)
                .ok_or(BraidError::Parse { pos: start, msg: format!("invalid letter {v}") })?;
            if self.peek() == Some(b'^') {
                return Err(self.error("exponents need a parenthesized group"));
            }
            out.push(letter);
            Ok(())
        }
    }

    fn integer(&mut self) -> Result<i64, BraidError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        s.parse::<i64>().map_err(|_| BraidError::Parse { pos: start, msg: "integer overflow".into() })
    }
}
