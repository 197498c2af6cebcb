//! Polynomials over GF(2) of arbitrary degree, packed into 64-bit limbs.
//!
//! Bit `i` of the packed form is the coefficient of `x^i`. Only the
//! operations needed for irreducibility and order tests are provided.

use std::fmt;

use dashu_int::{ops::BitTest, UBig};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    // little-endian limbs, no trailing zero limbs
    limbs: Vec<u64>,
}

/// Carry-less product of two 64-bit words.
pub(crate) fn clmul(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut b = b;
    let mut r = 0u128;
    while b != 0 {
        r ^= a << b.trailing_zeros();
        b &= b - 1;
    }
    r
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { limbs: vec![1] }
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self { limbs: vec![2] }
    }

    pub fn from_u128(v: u128) -> Self {
        let mut p = Self {
            limbs: vec![v as u64, (v >> 64) as u64],
        };
        p.normalize();
        p
    }

    pub fn from_limbs(limbs: Vec<u64>) -> Self {
        let mut p = Self { limbs };
        p.normalize();
        p
    }

    /// Parses a hexadecimal bitmask such as `0xB` (x^3 + x + 1). The `0x`
    /// prefix is optional, underscores are ignored.
    pub fn from_hex(text: &str) -> Result<Self> {
        let t = text.trim();
        let digits = t
            .strip_prefix("0x")
            .or_else(|| t.strip_prefix("0X"))
            .unwrap_or(t);
        let digits: Vec<u32> = digits
            .chars()
            .filter(|&c| c != '_')
            .map(|c| c.to_digit(16))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidHex(text.to_string()))?;
        if digits.is_empty() {
            return Err(Error::InvalidHex(text.to_string()));
        }
        let mut limbs = vec![0u64; digits.len().div_ceil(16)];
        for (i, d) in digits.iter().rev().enumerate() {
            limbs[i / 16] |= (*d as u64) << (4 * (i % 16));
        }
        Ok(Self::from_limbs(limbs))
    }

    pub fn to_hex(&self) -> String {
        match self.limbs.split_last() {
            None => "0x0".to_string(),
            Some((top, rest)) => {
                let mut s = format!("0x{top:x}");
                for l in rest.iter().rev() {
                    s.push_str(&format!("{l:016x}"));
                }
                s
            }
        }
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs == [1]
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = *self.limbs.last()?;
        Some(64 * (self.limbs.len() - 1) + 63 - top.leading_zeros() as usize)
    }

    pub fn bit(&self, i: usize) -> bool {
        self.limbs
            .get(i / 64)
            .is_some_and(|l| (l >> (i % 64)) & 1 == 1)
    }

    pub fn to_u128(&self) -> Option<u128> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0] as u128),
            2 => Some(self.limbs[0] as u128 | (self.limbs[1] as u128) << 64),
            _ => None,
        }
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> u32 {
        self.limbs.iter().map(|l| l.count_ones()).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.limbs.len() >= other.limbs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut limbs = long.limbs.clone();
        for (l, s) in limbs.iter_mut().zip(&short.limbs) {
            *l ^= s;
        }
        Self::from_limbs(limbs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0u64; self.limbs.len() + other.limbs.len()];
        for (i, &a) in self.limbs.iter().enumerate() {
            for (j, &b) in other.limbs.iter().enumerate() {
                let p = clmul(a, b);
                out[i + j] ^= p as u64;
                out[i + j + 1] ^= (p >> 64) as u64;
            }
        }
        Self::from_limbs(out)
    }

    /// Remainder of division by `modulus`.
    ///
    /// # Panics
    /// Panics if `modulus` is zero.
    pub fn rem(&self, modulus: &Self) -> Self {
        let dm = modulus.degree().expect("division by the zero polynomial");
        let mut r = self.limbs.clone();
        let Some(mut top) = self.degree() else {
            return Self::zero();
        };
        while top >= dm {
            if (r[top / 64] >> (top % 64)) & 1 == 1 {
                xor_shifted(&mut r, &modulus.limbs, top - dm);
            }
            if top == 0 {
                break;
            }
            top -= 1;
        }
        Self::from_limbs(r)
    }

    pub fn mulmod(&self, other: &Self, modulus: &Self) -> Self {
        self.mul(other).rem(modulus)
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn powmod(&self, e: &UBig, modulus: &Self) -> Self {
        let mut acc = Self::one().rem(modulus);
        let base = self.rem(modulus);
        for i in (0..e.bit_len()).rev() {
            acc = acc.mulmod(&acc, modulus);
            if e.bit(i) {
                acc = acc.mulmod(&base, modulus);
            }
        }
        acc
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }
}

fn xor_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let (w, s) = (shift / 64, shift % 64);
    for (i, &l) in src.iter().enumerate() {
        dst[i + w] ^= l << s;
        if s != 0 && i + w + 1 < dst.len() {
            dst[i + w + 1] ^= l >> (64 - s);
        }
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({})", self.to_hex())
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}
