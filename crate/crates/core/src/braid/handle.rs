//! Dehornoy handle reduction.
//!
//! A `σ_i`-handle is a subword `σ_i^e · u · σ_i^{-e}` where `u` has no
//! `σ_i^{±1}` and no `σ_{i-1}^{±1}`. Reducing it replaces every
//! `σ_{i+1}^d` in `u` by `σ_{i+1}^{-e} σ_i^d σ_{i+1}^e` and drops the ends.
//! Always reducing the handle whose right end is leftmost terminates, and a
//! word is trivial exactly when it reduces to the empty word.

use super::{BraidError, BraidWord};

pub(super) fn is_trivial(w: &BraidWord, step_cap: u64) -> Result<bool, BraidError> {
    let mut word: Vec<i32> = w.letters().to_vec();
    let mut steps: u64 = 0;
    let mut scan_from = 0;
    while let Some((open, close)) = first_handle(&word, scan_from) {
        let gen = word[open].abs();
        let e = word[open].signum();
        let mut reduced = Vec::with_capacity(close - open + 8);
        for &y in &word[open + 1..close] {
            if y.abs() == gen + 1 {
                reduced.extend_from_slice(&[-e * (gen + 1), y.signum() * gen, e * (gen + 1)]);
            } else {
                reduced.push(y);
            }
        }
        steps += 1 + reduced.len() as u64;
        if steps > step_cap {
            return Err(BraidError::StepCapExceeded(step_cap));
        }
        word.splice(open..=close, reduced);
        // Nothing ending before `open` was a handle, and that prefix is untouched.
        scan_from = open;
    }
    Ok(word.is_empty())
}

/// Finds the handle with the leftmost right end at or after `from`.
fn first_handle(word: &[i32], from: usize) -> Option<(usize, usize)> {
    for close in from.max(1)..word.len() {
        let gen = word[close].abs();
        let sign = word[close].signum();
        for open in (0..close).rev() {
            let y = word[open];
            if y.abs() == gen {
                if y.signum() == -sign {
                    return Some((open, close));
                }
                break;
            }
            if y.abs() == gen - 1 {
                break;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial(n: usize, letters: &[i32]) -> bool {
        is_trivial(&BraidWord::new(n, letters.to_vec()).unwrap(), u64::MAX).unwrap()
    }

    #[test]
    fn free_cancellation_is_a_handle() {
        assert!(trivial(2, &[1, -1]));
        assert!(trivial(3, &[2, 1, -1, -2]));
        assert!(!trivial(3, &[1, 1]));
    }

    #[test]
    fn braid_relations() {
        assert!(trivial(3, &[1, 2, 1, -2, -1, -2]));
        assert!(trivial(4, &[1, 3, -1, -3]));
        assert!(!trivial(3, &[1, 2, -1, -2]));
        assert!(!trivial(4, &[1, -3]));
    }

    #[test]
    fn leftmost_handle() {
        assert_eq!(first_handle(&[1, 2, -1], 0), Some((0, 2)));
        assert_eq!(first_handle(&[2, 1, -2], 0), None);
        assert_eq!(first_handle(&[1, 1, 2], 0), None);
    }
}
