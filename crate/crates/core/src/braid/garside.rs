//! Left-greedy Garside normal form `Δ^k · A_1 ⋯ A_r`.
//!
//! Simple elements are permutation braids, stored as 0-indexed one-line
//! permutations with the product of braids matching composition
//! `(p ∘ q)(x) = p(q(x))`.

use super::BraidWord;

type Simple = Vec<u8>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm {
    strands: usize,
    delta_power: i64,
    factors: Vec<Simple>,
}

impl NormalForm {
    pub fn of(w: &BraidWord) -> NormalForm {
        let n = w.strands();
        let mut delta_power = 0i64;
        let mut factors: Vec<Simple> = Vec::with_capacity(w.len());
        for &l in w.letters() {
            let i = l.unsigned_abs() as usize - 1;
            if l > 0 {
                let mut s = identity(n);
                s.swap(i, i + 1);
                push_factor(&mut factors, s);
            } else {
                // σ_i⁻¹ = Δ⁻¹ · (Δσ_i⁻¹), and x·Δ⁻¹ = Δ⁻¹·τ(x).
                delta_power -= 1;
                for f in factors.iter_mut() {
                    *f = tau(f);
                }
                let mut s = delta(n);
                s.swap(i, i + 1);
                push_factor(&mut factors, s);
            }
        }
        let top = delta(n);
        let leading = factors.iter().take_while(|f| **f == top).count();
        factors.drain(..leading);
        delta_power += leading as i64;
        while factors.last().is_some_and(|f| is_identity(f)) {
            factors.pop();
        }
        NormalForm { strands: n, delta_power, factors }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    /// The exponent `k` of the leading `Δ^k`.
    pub fn infimum(&self) -> i64 {
        self.delta_power
    }

    /// Number of non-`Δ` simple factors.
    pub fn canonical_length(&self) -> usize {
        self.factors.len()
    }

    pub fn is_identity(&self) -> bool {
        self.delta_power == 0 && self.factors.is_empty()
    }
}

fn identity(n: usize) -> Simple {
    (0..n as u8).collect()
}

fn is_identity(p: &[u8]) -> bool {
    p.iter().enumerate().all(|(i, &x)| x as usize == i)
}

fn delta(n: usize) -> Simple {
    (0..n as u8).rev().collect()
}

fn tau(p: &[u8]) -> Simple {
    let n = p.len() as u8;
    (0..p.len()).map(|x| n - 1 - p[p.len() - 1 - x]).collect()
}

/// Appends `s` and restores left-weightedness from the right.
fn push_factor(factors: &mut Vec<Simple>, s: Simple) {
    factors.push(s);
    let mut j = factors.len() - 1;
    while j > 0 {
        let (left, right) = factors.split_at_mut(j);
        if !left_weight(&mut left[j - 1], &mut right[0]) {
            break;
        }
        j -= 1;
    }
}

/// Moves generators from the start set of `b` into `a` until the start
/// set of `b` lies in the finishing set of `a`. Returns whether anything moved.
fn left_weight(a: &mut Simple, b: &mut Simple) -> bool {
    let n = a.len();
    let mut changed = false;
    let mut pos_in_b = vec![0usize; n];
    loop {
        for (pos, &v) in b.iter().enumerate() {
            pos_in_b[v as usize] = pos;
        }
        let movable = (0..n - 1).find(|&i| pos_in_b[i] > pos_in_b[i + 1] && a[i] < a[i + 1]);
        let Some(i) = movable else { return changed };
        a.swap(i, i + 1);
        let (pi, pj) = (pos_in_b[i], pos_in_b[i + 1]);
        b.swap(pi, pj);
        changed = true;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(n: usize, letters: &[i32]) -> NormalForm {
        NormalForm::of(&BraidWord::new(n, letters.to_vec()).unwrap())
    }

    #[test]
    fn half_twist_is_delta() {
        let f = nf(3, &[1, 2, 1]);
        assert_eq!(f.infimum(), 1);
        assert_eq!(f.canonical_length(), 0);
        assert_eq!(nf(4, &[1, 2, 1, 3, 2, 1]).infimum(), 1);
    }

    #[test]
    fn inverses_cancel() {
        assert!(nf(3, &[1, -1]).is_identity());
        assert!(nf(4, &[2, 3, -1, 1, -3, -2]).is_identity());
        assert!(nf(3, &[-1, 2, 1, -2]).is_identity() == false);
    }

    #[test]
    fn braid_relation_gives_equal_forms() {
        assert_eq!(nf(3, &[1, 2, 1]), nf(3, &[2, 1, 2]));
        assert_eq!(nf(4, &[1, 3]), nf(4, &[3, 1]));
        assert_ne!(nf(3, &[1, 2]), nf(3, &[2, 1]));
        assert_eq!(nf(3, &[-1]).infimum(), -1);
    }

    #[test]
    fn tau_swaps_generators() {
        let mut s = identity(4);
        s.swap(0, 1);
        let mut t = identity(4);
        t.swap(2, 3);
        assert_eq!(tau(&s), t);
    }
}
