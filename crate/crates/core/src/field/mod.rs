//! Arithmetic in GF(2^L) in the polynomial basis of a primitive modulus.
//!
//! The generator `α` is always the residue class of `x`. Elements are stored
//! as `u64` bitmasks, so element arithmetic is limited to `L <= 64`;
//! primitivity checks in [`is_primitive`] work for any degree.

mod poly;
pub mod table;

use dashu_int::UBig;

use crate::error::{Error, Result};

pub use poly::Gf2Poly;
pub(crate) use poly::clmul;
pub use table::{PolyTable, TableEntry};

/// Largest extension degree supported by element arithmetic.
pub const MAX_FIELD_LENGTH: u32 = 64;

/// An element of GF(2^L), tagged with the modulus of the context it belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    bits: u64,
    modulus: u128,
}

impl FieldElement {
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn to_hex(&self) -> String {
        format!("0x{:x}", self.bits)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldContext {
    length: u32,
    modulus: u128,
    order: UBig,
    factorization: Option<Vec<UBig>>,
    trace_mask: u64,
}

impl FieldContext {
    /// Builds a context whose modulus is verified primitive against the
    /// given factorization of 2^L - 1 (prime factors, repeated by multiplicity).
    pub fn new(length: u32, modulus: &Gf2Poly, factorization: Vec<UBig>) -> Result<Self> {
        if !is_primitive(length, modulus, &factorization)? {
            return Err(Error::NotPrimitive {
                poly: modulus.to_hex(),
                length,
            });
        }
        let mut ctx = Self::new_unverified(length, modulus)?;
        ctx.factorization = Some(factorization);
        Ok(ctx)
    }

    /// Builds a context without a primitivity proof. Arithmetic works (it is
    /// a field whenever the modulus is irreducible), but modules that rely on
    /// `α` generating the multiplicative group refuse it.
    pub fn new_unverified(length: u32, modulus: &Gf2Poly) -> Result<Self> {
        if length == 0 || length > MAX_FIELD_LENGTH {
            return Err(Error::LengthTooLarge {
                length,
                max: MAX_FIELD_LENGTH,
                what: "field element arithmetic",
            });
        }
        check_modulus_shape(length, modulus)?;
        let modulus = modulus.to_u128().expect("degree <= 64 fits in u128");
        let mut ctx = Self {
            length,
            modulus,
            order: (UBig::ONE << length as usize) - UBig::ONE,
            factorization: None,
            trace_mask: 0,
        };
        ctx.trace_mask = (0..length)
            .filter(|&i| ctx.trace_by_definition(1u64 << i) == 1)
            .fold(0, |m, i| m | 1 << i);
        Ok(ctx)
    }

    /// Context for degree `length` from a polynomial table.
    pub fn from_table(table: &PolyTable, length: u32) -> Result<Self> {
        let entry = table.get(length).ok_or(Error::NoTableEntry(length))?;
        Self::new(length, &entry.poly, entry.factors.clone())
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn modulus(&self) -> Gf2Poly {
        Gf2Poly::from_u128(self.modulus)
    }

    pub fn modulus_bits(&self) -> u128 {
        self.modulus
    }

    /// 2^L - 1.
    pub fn order(&self) -> &UBig {
        &self.order
    }

    pub(crate) fn order_u64(&self) -> u64 {
        u64::MAX >> (64 - self.length)
    }

    pub fn factorization(&self) -> Option<&[UBig]> {
        self.factorization.as_deref()
    }

    pub fn is_verified(&self) -> bool {
        self.factorization.is_some()
    }

    pub(crate) fn require_verified(&self) -> Result<()> {
        if self.is_verified() {
            Ok(())
        } else {
            Err(Error::UnverifiedContext)
        }
    }

    fn mask(&self) -> u64 {
        self.order_u64()
    }

    pub fn element(&self, bits: u64) -> Result<FieldElement> {
        if bits & !self.mask() != 0 {
            return Err(Error::ContextMismatch);
        }
        Ok(self.wrap(bits))
    }

    pub(crate) fn wrap(&self, bits: u64) -> FieldElement {
        FieldElement {
            bits,
            modulus: self.modulus,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    /// The generator `α`, the residue class of `x`.
    pub fn alpha(&self) -> FieldElement {
        if self.length == 1 {
            // x ≡ 1 mod (x + 1)
            self.one()
        } else {
            self.wrap(2)
        }
    }

    fn check(&self, a: &FieldElement) -> Result<u64> {
        if a.modulus != self.modulus {
            return Err(Error::ContextMismatch);
        }
        Ok(a.bits)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.wrap(self.check(a)? ^ self.check(b)?))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.wrap(self.mul_bits(self.check(a)?, self.check(b)?)))
    }

    pub(crate) fn mul_bits(&self, a: u64, b: u64) -> u64 {
        self.reduce(clmul(a, b))
    }

    fn reduce(&self, mut v: u128) -> u64 {
        let l = self.length;
        while v >> l != 0 {
            let top = 127 - v.leading_zeros();
            v ^= self.modulus << (top - l);
        }
        v as u64
    }

    pub(crate) fn pow_bits(&self, mut base: u64, mut e: u128) -> u64 {
        let mut acc = 1u64;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul_bits(acc, base);
            }
            base = self.mul_bits(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^e`. Negative exponents invert `a`; `pow(0, e)` with `e < 0` fails.
    pub fn pow(&self, a: &FieldElement, e: i128) -> Result<FieldElement> {
        let bits = self.check(a)?;
        if bits == 0 {
            return match e {
                0 => Ok(self.one()),
                e if e > 0 => Ok(self.zero()),
                _ => Err(Error::ZeroInverse),
            };
        }
        let order = self.order_u64() as i128;
        let e = e.rem_euclid(order) as u128;
        Ok(self.wrap(self.pow_bits(bits, e)))
    }

    /// `a^2`.
    pub fn frobenius(&self, a: &FieldElement) -> Result<FieldElement> {
        let bits = self.check(a)?;
        Ok(self.wrap(self.mul_bits(bits, bits)))
    }

    pub fn inverse(&self, a: &FieldElement) -> Result<FieldElement> {
        self.pow(a, -1)
    }

    fn trace_by_definition(&self, a: u64) -> u64 {
        let mut sum = 0;
        let mut t = a;
        for _ in 0..self.length {
            sum ^= t;
            t = self.mul_bits(t, t);
        }
        sum
    }

    /// Absolute trace `a + a^2 + ... + a^(2^(L-1))`.
    pub fn trace(&self, a: &FieldElement) -> Result<u8> {
        let sum = self.trace_by_definition(self.check(a)?);
        debug_assert!(sum <= 1, "trace left the prime field");
        Ok(sum as u8)
    }

    /// Trace through the precomputed linear functional; equal to [`Self::trace`].
    pub(crate) fn trace_bits(&self, a: u64) -> u8 {
        ((a & self.trace_mask).count_ones() & 1) as u8
    }
}

fn check_modulus_shape(length: u32, poly: &Gf2Poly) -> Result<()> {
    if poly.degree() != Some(length as usize) {
        return Err(Error::DegreeMismatch {
            poly: poly.to_hex(),
            expected: length,
            found: poly.degree(),
        });
    }
    if !poly.bit(0) {
        return Err(Error::ZeroConstantTerm(poly.to_hex()));
    }
    Ok(())
}

fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// True iff `poly` (degree `length`) is primitive: irreducible, and `x` has
/// multiplicative order exactly 2^L - 1 modulo it.
///
/// `factorization` lists the prime factors of 2^L - 1 with multiplicity; its
/// product must equal 2^L - 1. Irreducibility uses Rabin's test.
pub fn is_primitive(length: u32, poly: &Gf2Poly, factorization: &[UBig]) -> Result<bool> {
    if length == 0 {
        return Err(Error::DegreeMismatch {
            poly: poly.to_hex(),
            expected: 0,
            found: poly.degree(),
        });
    }
    if poly.degree() != Some(length as usize) {
        return Err(Error::DegreeMismatch {
            poly: poly.to_hex(),
            expected: length,
            found: poly.degree(),
        });
    }
    let order = (UBig::ONE << length as usize) - UBig::ONE;
    let product = factorization.iter().fold(UBig::ONE, |acc, p| acc * p);
    if product != order {
        return Err(Error::FactorizationMismatch { length });
    }
    if !poly.bit(0) {
        return Ok(false);
    }

    // Rabin: x^(2^L) ≡ x, and gcd(x^(2^(L/q)) - x, f) = 1 for primes q | L.
    let x = Gf2Poly::x().rem(poly);
    let frob_iter = |times: u32| {
        let mut t = x.clone();
        for _ in 0..times {
            t = t.mulmod(&t, poly);
        }
        t
    };
    if frob_iter(length) != x {
        return Ok(false);
    }
    for q in prime_divisors(length) {
        let diff = frob_iter(length / q).add(&x);
        if !diff.gcd(poly).is_one() {
            return Ok(false);
        }
    }

    let mut distinct: Vec<&UBig> = factorization.iter().collect();
    distinct.sort();
    distinct.dedup();
    for p in distinct {
        if p == &UBig::ONE {
            continue;
        }
        if x.powmod(&(&order / p), poly).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> FieldContext {
        FieldContext::new(3, &Gf2Poly::from_u128(0b1011), vec![UBig::from(7u8)]).unwrap()
    }

    #[test]
    fn add_examples() {
        let f = gf8();
        let a = f.element(0b101).unwrap();
        assert_eq!(f.add(&a, &a).unwrap(), f.zero());
        assert_eq!(f.add(&a, &f.zero()).unwrap(), a);
        let x1 = f.element(0b11).unwrap();
        let x = f.element(0b10).unwrap();
        assert_eq!(f.add(&x1, &x).unwrap(), f.one());
    }

    #[test]
    fn mul_examples() {
        let f = gf8();
        let x = f.alpha();
        let x2 = f.element(0b100).unwrap();
        assert_eq!(f.mul(&x, &x2).unwrap().bits(), 0b11);
        for v in 1..8 {
            let a = f.element(v).unwrap();
            assert_eq!(f.mul(&a, &f.one()).unwrap(), a);
            assert_eq!(f.mul(&a, &f.inverse(&a).unwrap()).unwrap(), f.one());
        }
    }

    #[test]
    fn pow_examples() {
        let f = gf8();
        let x = f.alpha();
        assert_eq!(f.pow(&x, 7).unwrap(), f.one());
        assert_eq!(f.pow(&x, 3).unwrap().bits(), 0b11);
        for v in 0..8 {
            let a = f.element(v).unwrap();
            assert_eq!(f.pow(&a, 2).unwrap(), f.frobenius(&a).unwrap());
        }
        assert_eq!(f.pow(&f.zero(), -1), Err(Error::ZeroInverse));
        assert_eq!(f.pow(&x, -1).unwrap(), f.pow(&x, 6).unwrap());
        assert_eq!(f.pow(&x, 0).unwrap(), f.one());
    }

    #[test]
    fn trace_examples() {
        let f = gf8();
        assert_eq!(f.trace(&f.zero()).unwrap(), 0);
        assert_eq!(f.trace(&f.one()).unwrap(), 1);
        // x + x^2 + x^4 with x^4 = x^2 + x gives 0
        assert_eq!(f.trace(&f.alpha()).unwrap(), 0);
    }

    #[test]
    fn mismatched_context_is_rejected() {
        let f = gf8();
        let g = FieldContext::new_unverified(3, &Gf2Poly::from_u128(0b1101)).unwrap();
        let a = g.one();
        assert_eq!(f.add(&f.one(), &a), Err(Error::ContextMismatch));
        assert_eq!(f.mul(&a, &a), Err(Error::ContextMismatch));
        assert_eq!(f.element(8), Err(Error::ContextMismatch));
    }

    #[test]
    fn primitivity_examples() {
        let seven = [UBig::from(7u8)];
        assert!(is_primitive(3, &Gf2Poly::from_u128(0b1011), &seven).unwrap());
        assert!(!is_primitive(3, &Gf2Poly::from_u128(0b1111), &seven).unwrap());
        let fifteen = [UBig::from(3u8), UBig::from(5u8)];
        assert!(!is_primitive(4, &Gf2Poly::from_u128(0b11111), &fifteen).unwrap());
        assert!(is_primitive(4, &Gf2Poly::from_u128(0b10011), &fifteen).unwrap());
    }

    #[test]
    fn primitivity_errors() {
        let p = Gf2Poly::from_u128(0b1011);
        assert_eq!(
            is_primitive(3, &p, &[UBig::from(5u8)]),
            Err(Error::FactorizationMismatch { length: 3 })
        );
        assert!(matches!(
            is_primitive(4, &p, &[UBig::from(3u8), UBig::from(5u8)]),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn unverified_context_refuses_primitive_only_users() {
        let g = FieldContext::new_unverified(4, &Gf2Poly::from_u128(0b11111)).unwrap();
        assert_eq!(g.require_verified(), Err(Error::UnverifiedContext));
        assert!(FieldContext::new(4, &Gf2Poly::from_u128(0b11111), vec![UBig::from(3u8), UBig::from(5u8)]).is_err());
    }
}
