//! Cyclotomic cosets of 2 modulo 2^L - 1.
//!
//! Exponent `e` and `2e mod (2^L - 1)` label the same coset; in binary,
//! doubling is a rotation of the `L`-bit pattern, so all members share the
//! leader's weight. Cosets live in `[1, 2^L - 2]`, plus the single coset
//! `{2^L - 1}` (the exponent `0`, weight `L`), which only enters at order `k = L`.

use std::collections::BTreeMap;

use dashu_int::UBig;
use serde::Serialize;

use crate::bigmath::binomial;
use crate::error::{Error, Result};

/// Largest `L` for which cosets are listed one by one.
pub const MAX_COSET_ENUM_LENGTH: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclotomicCoset {
    leader: u64,
    elements: Vec<u64>,
    cardinal: u32,
    weight: u32,
}

impl CyclotomicCoset {
    pub fn leader(&self) -> u64 {
        self.leader
    }

    /// Members in doubling order, starting at the leader.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn cardinal(&self) -> u32 {
        self.cardinal
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn contains(&self, e: u64) -> bool {
        self.elements.contains(&e)
    }
}

fn check_enum_length(length: u32) -> Result<()> {
    if length == 0 || length > MAX_COSET_ENUM_LENGTH {
        return Err(Error::LengthTooLarge {
            length,
            max: MAX_COSET_ENUM_LENGTH,
            what: "coset enumeration",
        });
    }
    Ok(())
}

fn modulus(length: u32) -> u64 {
    u64::MAX >> (64 - length)
}

#[inline]
fn rotate(e: u64, length: u32) -> u64 {
    ((e << 1) | (e >> (length - 1))) & modulus(length)
}

fn orbit(e: u64, length: u32) -> Vec<u64> {
    let mut out = vec![e];
    let mut cur = rotate(e, length);
    while cur != e {
        out.push(cur);
        cur = rotate(cur, length);
    }
    out
}

fn is_leader(e: u64, length: u32) -> bool {
    let mut cur = rotate(e, length);
    while cur != e {
        if cur < e {
            return false;
        }
        cur = rotate(cur, length);
    }
    true
}

fn build(leader: u64, length: u32) -> CyclotomicCoset {
    let elements = orbit(leader, length);
    CyclotomicCoset {
        leader,
        cardinal: elements.len() as u32,
        weight: leader.count_ones(),
        elements,
    }
}

/// Coset containing `e`, for `1 <= e <= 2^L - 2`.
pub fn coset_of(e: u64, length: u32) -> Result<CyclotomicCoset> {
    if length == 0 || length > 64 {
        return Err(Error::LengthTooLarge {
            length,
            max: 64,
            what: "coset arithmetic",
        });
    }
    if e == 0 || e >= modulus(length) {
        return Err(Error::ExponentOutOfRange { length, exponent: e });
    }
    let leader = *orbit(e, length).iter().min().expect("non-empty orbit");
    Ok(build(leader, length))
}

/// The weight-`L` coset `{2^L - 1}`, i.e. the exponent `0`.
pub fn full_weight_coset(length: u32) -> CyclotomicCoset {
    let e = modulus(length);
    CyclotomicCoset {
        leader: e,
        elements: vec![e],
        cardinal: 1,
        weight: length,
    }
}

/// All cosets whose leader weight lies in `[1, k]`, sorted by leader.
pub fn cosets_up_to_weight(length: u32, order: u32) -> Result<Vec<CyclotomicCoset>> {
    check_enum_length(length)?;
    crate::anf::check_order(length, order)?;
    let mut out: Vec<CyclotomicCoset> = (1..modulus(length))
        .filter(|&e| e.count_ones() <= order && is_leader(e, length))
        .map(|e| build(e, length))
        .collect();
    if order == length {
        out.push(full_weight_coset(length));
    }
    Ok(out)
}

/// Every coset, including `{2^L - 1}`.
pub fn all_cosets(length: u32) -> Result<Vec<CyclotomicCoset>> {
    cosets_up_to_weight(length, length)
}

/// `N_k = C(L,1) + ... + C(L,k)`, the largest linear complexity an order-`k`
/// filter can reach. `k = 0` gives the empty sum.
pub fn nk(length: u32, order: u32) -> Result<UBig> {
    if order > length {
        return Err(Error::OrderOutOfRange { length, order });
    }
    Ok((1..=order).map(|i| binomial(length, i)).sum())
}

/// Period of the characteristic sequence of `c`: `(2^L - 1) / gcd(leader, 2^L - 1)`.
pub fn coset_period(c: &CyclotomicCoset, length: u32) -> u64 {
    let n = modulus(length);
    n / gcd(c.leader % n, n)
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Number of cosets with the given weight and cardinal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetClass {
    pub weight: u32,
    pub cardinal: u32,
    #[serde(serialize_with = "crate::bigmath::ser_display")]
    pub count: UBig,
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Aperiodic binary necklaces of length `n` with `m` ones.
fn lyndon_count(n: u32, m: u32) -> UBig {
    let g = gcd(n as u64, m as u64) as u32;
    let (mut pos, mut neg) = (UBig::ZERO, UBig::ZERO);
    for d in divisors(g) {
        let term = binomial(n / d, m / d);
        match mobius(d) {
            1 => pos += term,
            -1 => neg += term,
            _ => {}
        }
    }
    (pos - neg) / UBig::from(n)
}

/// Cosets of weight `1..=k` grouped by (weight, cardinal), counted without
/// listing them. A coset of cardinal `r` is an `L`-bit pattern made of `L/r`
/// copies of an aperiodic `r`-bit word, so it has weight divisible by `L/r`.
pub fn coset_census(length: u32, order: u32) -> Result<Vec<CosetClass>> {
    crate::anf::check_order(length, order)?;
    let mut out = Vec::new();
    for weight in 1..=order {
        for r in divisors(length) {
            let reps = length / r;
            if weight % reps != 0 {
                continue;
            }
            let count = lyndon_count(r, weight / reps);
            if count != UBig::ZERO {
                out.push(CosetClass {
                    weight,
                    cardinal: r,
                    count,
                });
            }
        }
    }
    Ok(out)
}

/// Census collapsed to cardinal -> number of cosets.
pub fn cardinal_counts(length: u32, order: u32) -> Result<BTreeMap<u32, UBig>> {
    let mut map = BTreeMap::new();
    for c in coset_census(length, order)? {
        *map.entry(c.cardinal).or_insert(UBig::ZERO) += c.count;
    }
    Ok(map)
}

/// `N`, the number of cosets of weight `1..=k`.
pub fn n_cosets(length: u32, order: u32) -> Result<UBig> {
    Ok(coset_census(length, order)?.into_iter().map(|c| c.count).sum())
}
