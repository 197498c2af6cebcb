//! Linear complexity (Berlekamp-Massey over GF(2)) and minimal period.

use crate::error::{Error, Result};
use crate::field::Gf2Poly;

/// Shortest LFSR generating a finite sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityResult {
    /// Linear complexity.
    pub lc: usize,
    /// Connection polynomial `C(x) = 1 + c_1 x + ... + c_lc x^lc`, bit `i`
    /// holding `c_i`, with `s_n = Σ_{i=1}^{lc} c_i s_{n-i}` for `n >= lc`.
    /// Its degree equals `lc` for purely periodic input and may be lower
    /// for a sequence with a non-periodic head.
    pub connection_poly: Gf2Poly,
    /// Set when the input was empty (`lc` is then 0 by convention).
    pub empty_input: bool,
}

impl ComplexityResult {
    /// True iff the recurrence reproduces `bits` after the first `lc` terms.
    pub fn regenerates(&self, bits: &[u8]) -> bool {
        let taps: Vec<usize> = (1..=self.lc).filter(|&i| self.connection_poly.bit(i)).collect();
        (self.lc..bits.len()).all(|n| {
            let predicted = taps.iter().fold(0, |acc, &i| acc ^ bits[n - i]);
            predicted == bits[n] & 1
        })
    }
}

fn pack(bits: impl Iterator<Item = u8>, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len.div_ceil(64) + 1];
    for (i, b) in bits.enumerate() {
        out[i / 64] |= ((b & 1) as u64) << (i % 64);
    }
    out
}

#[inline]
fn word_at(v: &[u64], pos: usize) -> u64 {
    let (q, s) = (pos / 64, pos % 64);
    let lo = v.get(q).copied().unwrap_or(0) >> s;
    if s == 0 {
        lo
    } else {
        lo | v.get(q + 1).copied().unwrap_or(0) << (64 - s)
    }
}

fn xor_shifted_into(dst: &mut Vec<u64>, src: &[u64], shift: usize) {
    let (w, s) = (shift / 64, shift % 64);
    let need = src.len() + w + 1;
    if dst.len() < need {
        dst.resize(need, 0);
    }
    for (i, &l) in src.iter().enumerate() {
        dst[i + w] ^= l << s;
        if s != 0 {
            dst[i + w + 1] ^= l >> (64 - s);
        }
    }
}

/// Berlekamp-Massey on a bit sequence (values other than 0/1 use their low bit).
pub fn berlekamp_massey(bits: &[u8]) -> ComplexityResult {
    let n_total = bits.len();
    // reversed so that the discrepancy window s_n, s_{n-1}, ... is contiguous
    let rev = pack(bits.iter().rev().copied(), n_total);
    let mut c: Vec<u64> = vec![1];
    let mut b: Vec<u64> = vec![1];
    let mut lc = 0usize;
    let mut shift = 1usize;
    for n in 0..n_total {
        let off = n_total - 1 - n;
        let words = lc / 64 + 1;
        let mut acc = 0u64;
        for w in 0..words.min(c.len()) {
            acc ^= word_at(&rev, off + 64 * w) & c[w];
        }
        if acc.count_ones() & 1 == 0 {
            shift += 1;
        } else if 2 * lc <= n {
            let t = c.clone();
            xor_shifted_into(&mut c, &b, shift);
            lc = n + 1 - lc;
            b = t;
            shift = 1;
        } else {
            xor_shifted_into(&mut c, &b, shift);
            shift += 1;
        }
    }
    ComplexityResult {
        lc,
        connection_poly: Gf2Poly::from_limbs(c),
        empty_input: n_total == 0,
    }
}

/// Linear complexity of the periodic sequence with the given period,
/// via Berlekamp-Massey on two copies (lc <= period, BM needs 2·lc terms).
pub fn linear_complexity_periodic(period: &[u8]) -> Result<usize> {
    if period.is_empty() {
        return Err(Error::EmptySequence);
    }
    let doubled: Vec<u8> = period.iter().chain(period).copied().collect();
    Ok(berlekamp_massey(&doubled).lc)
}

/// Smallest `d` dividing `bits.len()` with `bits` `d`-periodic. Returns 0 for
/// empty input.
pub fn min_period(bits: &[u8]) -> usize {
    let n = bits.len();
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| (d..n).all(|i| bits[i] & 1 == bits[i - d] & 1))
        .unwrap_or(0)
}
