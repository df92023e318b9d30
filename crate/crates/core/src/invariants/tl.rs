//! Temperley–Lieb diagrams and the Kauffman-bracket state sum for braid closures.
//!
//! A diagram on `n` strands is a non-crossing perfect matching of `2n`
//! boundary points: top points `0..n` and bottom points `n..2n`, both read
//! left to right. Braids are read top to bottom, so `X · σ_i` stacks the
//! crossing below `X`.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::laurent::LaurentPolynomial;

pub(crate) type Diagram = Vec<u8>;

/// The Catalan basis of `TL_n` together with the right action of each `e_i`.
pub(crate) struct TemperleyLieb {
    strands: usize,
    basis: Vec<Diagram>,
    /// `act[i - 1][b] = (index of b·e_i, closed loops produced)`.
    act: Vec<Vec<(usize, u32)>>,
    /// Loops in the closure of each basis diagram.
    closure_loops: Vec<u32>,
    identity: usize,
}

impl TemperleyLieb {
    pub(crate) fn new(strands: usize) -> Self {
        assert!(strands >= 1);
        let basis = non_crossing_matchings(strands);
        let index: HashMap<&Diagram, usize> = basis.iter().enumerate().map(|(i, d)| (d, i)).collect();
        let act = (1..strands)
            .map(|g| {
                let e = generator(strands, g);
                basis
                    .iter()
                    .map(|d| {
                        let (prod, loops) = compose(d, &e, strands);
                        (index[&prod], loops)
                    })
                    .collect()
            })
            .collect();
        let closure_loops = basis.iter().map(|d| closure_loops(d, strands)).collect();
        let identity = index[&identity(strands)];
        TemperleyLieb { strands, basis, act, closure_loops, identity }
    }

    pub(crate) fn strands(&self) -> usize {
        self.strands
    }

    pub(crate) fn dimension(&self) -> usize {
        self.basis.len()
    }

    #[cfg(test)]
    pub(crate) fn basis(&self) -> &[Diagram] {
        &self.basis
    }

    /// Kauffman bracket of the closure of `letters`, normalized so the
    /// unknot is 1, in the variable `A`.
    pub(crate) fn closed_bracket(&self, letters: &[i32]) -> LaurentPolynomial {
        let a = LaurentPolynomial::monomial(1, 1);
        let a_inv = LaurentPolynomial::monomial(1, -1);
        let delta = LaurentPolynomial::from_terms([(2, -1), (-2, -1)]);
        let max_loops = 2 * self.strands + 1;
        let delta_pows: Vec<LaurentPolynomial> =
            (0..=max_loops).scan(LaurentPolynomial::one(), |acc, _| {
                let cur = acc.clone();
                *acc = &*acc * &delta;
                Some(cur)
            }).collect();

        let mut state: Vec<LaurentPolynomial> = vec![LaurentPolynomial::zero(); self.dimension()];
        state[self.identity] = LaurentPolynomial::one();
        for &l in letters {
            // σ ↦ A + A⁻¹e, σ⁻¹ ↦ A⁻¹ + A e.
            let (keep, smooth) = if l > 0 { (&a, &a_inv) } else { (&a_inv, &a) };
            let table = &self.act[l.unsigned_abs() as usize - 1];
            let mut next = vec![LaurentPolynomial::zero(); self.dimension()];
            for (b, coeff) in state.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                next[b] = &next[b] + &(coeff * keep);
                let (target, loops) = table[b];
                let term = &(coeff * smooth) * &delta_pows[loops as usize];
                next[target] = &next[target] + &term;
            }
            state = next;
        }
        state
            .iter()
            .zip(&self.closure_loops)
            .filter(|(c, _)| !c.is_zero())
            .fold(LaurentPolynomial::zero(), |acc, (c, &loops)| {
                &acc + &(c * &delta_pows[loops as usize - 1])
            })
    }
}

/// `(-A³)^{-writhe}`.
pub(crate) fn writhe_correction(writhe: i64) -> LaurentPolynomial {
    let sign = if writhe.rem_euclid(2) == 0 { 1 } else { -1 };
    LaurentPolynomial::monomial(BigInt::from(sign), -3 * writhe)
}

fn identity(n: usize) -> Diagram {
    (0..2 * n).map(|p| ((p + n) % (2 * n)) as u8).collect()
}

/// `e_g` for 1-indexed `g`: caps between strands `g` and `g + 1`.
fn generator(n: usize, g: usize) -> Diagram {
    let mut d = identity(n);
    let (i, j) = (g - 1, g);
    d[i] = j as u8;
    d[j] = i as u8;
    d[n + i] = (n + j) as u8;
    d[n + j] = (n + i) as u8;
    d
}

/// All non-crossing matchings; boundary points are taken in circular order
/// (top left to right, then bottom right to left).
fn non_crossing_matchings(n: usize) -> Vec<Diagram> {
    let circ_to_point = |c: usize| if c < n { c } else { 3 * n - 1 - c };
    let mut out = Vec::new();
    let mut partner = vec![usize::MAX; 2 * n];
    fn rec(partner: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(first) = partner.iter().position(|&p| p == usize::MAX) else {
            out.push(partner.clone());
            return;
        };
        // Pair `first` with a later free point so the enclosed run is even.
        let mut k = first + 1;
        while k < partner.len() {
            if partner[k] != usize::MAX {
                break;
            }
            if (k - first) % 2 == 1 {
                partner[first] = k;
                partner[k] = first;
                rec(partner, out);
                partner[first] = usize::MAX;
                partner[k] = usize::MAX;
            }
            k += 1;
        }
    }
    let mut circ = Vec::new();
    rec(&mut partner, &mut circ);
    for m in circ {
        let mut d = vec![0u8; 2 * n];
        for (c, &pc) in m.iter().enumerate() {
            d[circ_to_point(c)] = circ_to_point(pc) as u8;
        }
        out.push(d);
    }
    out.sort();
    out
}

/// Stacks `upper` above `lower`; returns the product diagram and the number
/// of closed loops formed in the middle.
fn compose(upper: &[u8], lower: &[u8], n: usize) -> (Diagram, u32) {
    let mut result = vec![0u8; 2 * n];
    let mut seen_mid = vec![false; n];
    // Walks from an outer point until it exits on the other outer boundary.
    let walk = |start_in_upper: bool, start: usize, seen_mid: &mut Vec<bool>| -> usize {
        let mut in_upper = start_in_upper;
        let mut p = start;
        loop {
            let q = if in_upper { upper[p] as usize } else { lower[p] as usize };
            if in_upper {
                if q < n {
                    return q;
                }
                let m = q - n;
                seen_mid[m] = true;
                in_upper = false;
                p = m;
            } else {
                if q >= n {
                    return q;
                }
                seen_mid[q] = true;
                in_upper = true;
                p = q + n;
            }
        }
    };
    for top in 0..n {
        let end = walk(true, top, &mut seen_mid);
        result[top] = end as u8;
    }
    for bottom in n..2 * n {
        let end = walk(false, bottom, &mut seen_mid);
        // `end` is in upper-top (< n) or lower-bottom (>= n) coordinates; both match result labels.
        result[bottom] = end as u8;
    }
    let mut loops = 0;
    for start in 0..n {
        if seen_mid[start] {
            continue;
        }
        loops += 1;
        let mut m = start;
        loop {
            seen_mid[m] = true;
            // Middle point m is upper-bottom n+m and lower-top m.
            let down = lower[m] as usize;
            debug_assert!(down < n);
            seen_mid[down] = true;
            let up = upper[down + n] as usize - n;
            if up == start {
                break;
            }
            m = up;
        }
    }
    (result, loops)
}

fn closure_loops(d: &[u8], n: usize) -> u32 {
    let mut seen = vec![false; 2 * n];
    let mut loops = 0;
    for start in 0..2 * n {
        if seen[start] {
            continue;
        }
        loops += 1;
        let mut p = start;
        loop {
            seen[p] = true;
            let q = d[p] as usize;
            seen[q] = true;
            // Closure arcs join top j with bottom j.
            let next = if q < n { q + n } else { q - n };
            if next == start {
                break;
            }
            p = next;
        }
    }
    loops
}
