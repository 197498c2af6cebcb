//! Filter functions in algebraic normal form.
//!
//! A [`FilterFunction`] of order `k` over `L` register stages is an xor of
//! and-monomials in the stage bits `x0, ..., x{L-1}`, with no constant term
//! and at least one monomial of degree exactly `k`. There are
//! `(2^C(L,k) - 1) · 2^C(L,k-1) ··· 2^C(L,1)` such functions.
//!
//! Text form: monomials joined by `+`, taps joined by `*`, e.g. `x0 + x1*x3`.
//! JSON form: an array of tap arrays, e.g. `[[0],[1,3]]`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use dashu_int::UBig;
use rand::Rng;
use thiserror::Error;

use crate::bigmath::{binomial, pow2};
use crate::cosets::nk;
use crate::error::{Error, Result};
use crate::lfsr::{BitWindow, LfsrGenerator};

/// Default limit on the number of functions [`FilterEnumerator`] will walk.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

/// Largest `N_k` (number of candidate monomials) for sampling.
pub const MAX_SAMPLED_MONOMIALS: u64 = 1 << 20;

/// Largest `log2(nfk)` for which [`count_filters`] materializes the integer.
pub const MAX_COUNT_BITS: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnfParseError {
    #[error("empty filter expression")]
    Empty,
    #[error("constant term is not allowed in a filter function")]
    ConstantTerm,
    #[error("duplicate monomial {0}")]
    DuplicateMonomial(String),
    #[error("tap x{0} repeated inside one monomial")]
    DuplicateTap(u32),
    #[error("tap x{tap} out of range for L = {length}")]
    TapOutOfRange { tap: u32, length: u32 },
    #[error("malformed term {0:?}")]
    Malformed(String),
}

/// A product of distinct register taps, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(u64);

impl Monomial {
    pub fn from_mask(mask: u64) -> Option<Self> {
        (mask != 0).then_some(Self(mask))
    }

    /// Monomial from tap indices; rejects repeats and empty input.
    pub fn from_taps(taps: &[u32]) -> std::result::Result<Self, AnfParseError> {
        let mut mask = 0u64;
        for &t in taps {
            if t >= 64 {
                return Err(AnfParseError::TapOutOfRange { tap: t, length: 64 });
            }
            if mask >> t & 1 == 1 {
                return Err(AnfParseError::DuplicateTap(t));
            }
            mask |= 1 << t;
        }
        Self::from_mask(mask).ok_or(AnfParseError::ConstantTerm)
    }

    pub fn mask(&self) -> u64 {
        self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn taps(&self) -> impl Iterator<Item = u32> + '_ {
        let mut m = self.0;
        std::iter::from_fn(move || {
            (m != 0).then(|| {
                let t = m.trailing_zeros();
                m &= m - 1;
                t
            })
        })
    }

    #[inline]
    pub fn evaluate_mask(&self, window: u64) -> u8 {
        (window & self.0 == self.0) as u8
    }
}

// Canonical order: by degree, then lexicographically by tap list.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.taps().cmp(other.taps()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.taps().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "x{t}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FilterFunction {
    length: u32,
    order: u32,
    monomials: BTreeSet<Monomial>,
}

impl FilterFunction {
    /// Validates and builds a filter over `length` stages. The order is the
    /// largest monomial degree.
    pub fn new(length: u32, monomials: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for m in monomials {
            if let Some(tap) = m.taps().find(|&t| t >= length) {
                return Err(AnfParseError::TapOutOfRange { tap, length }.into());
            }
            if !set.insert(m) {
                return Err(AnfParseError::DuplicateMonomial(m.to_string()).into());
            }
        }
        let order = set.iter().map(Monomial::degree).max().ok_or(AnfParseError::Empty)?;
        Ok(Self {
            length,
            order,
            monomials: set,
        })
    }

    pub fn from_taps(length: u32, monomials: &[&[u32]]) -> Result<Self> {
        let ms = monomials
            .iter()
            .map(|t| Monomial::from_taps(t))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(length, ms)
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.monomials.iter()
    }

    pub fn num_monomials(&self) -> usize {
        self.monomials.len()
    }

    pub fn evaluate(&self, w: BitWindow) -> Result<u8> {
        if w.len() != self.length {
            return Err(Error::LengthMismatch {
                expected: self.length as usize,
                found: w.len() as usize,
            });
        }
        Ok(self.evaluate_mask(w.bits()))
    }

    #[inline]
    pub fn evaluate_mask(&self, window: u64) -> u8 {
        self.monomials
            .iter()
            .fold(0, |acc, m| acc ^ m.evaluate_mask(window))
    }

    /// `z_n = F(a_n, ..., a_{n+L-1})` for `n < len`, from the generator's initial state.
    pub fn filter_sequence(&self, gen: &LfsrGenerator, len: usize) -> Result<Vec<u8>> {
        if gen.length() != self.length {
            return Err(Error::LengthMismatch {
                expected: self.length as usize,
                found: gen.length() as usize,
            });
        }
        let mut g = gen.clone();
        g.reset();
        Ok((0..len)
            .map(|_| {
                let z = self.evaluate_mask(g.state().bits());
                g.next_bit();
                z
            })
            .collect())
    }

    /// Filter output over precomputed windows (see [`LfsrGenerator::period_windows`]).
    pub fn apply_windows(&self, windows: &[u64]) -> Vec<u8> {
        windows.iter().map(|&w| self.evaluate_mask(w)).collect()
    }

    /// Symmetric difference of the monomial sets, `None` if it is empty.
    pub fn xor(&self, other: &Self) -> Option<Self> {
        let set: Vec<Monomial> = self
            .monomials
            .symmetric_difference(&other.monomials)
            .copied()
            .collect();
        Self::new(self.length.max(other.length), set).ok()
    }

    pub fn to_json_monomials(&self) -> Vec<Vec<u32>> {
        self.monomials.iter().map(|m| m.taps().collect()).collect()
    }

    pub fn from_json_monomials(length: u32, monomials: &[Vec<u32>]) -> Result<Self> {
        let refs: Vec<&[u32]> = monomials.iter().map(Vec::as_slice).collect();
        Self::from_taps(length, &refs)
    }
}

impl fmt::Display for FilterFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.monomials.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Canonical text form, e.g. `x0 + x1*x3`.
pub fn format_anf(f: &FilterFunction) -> String {
    f.to_string()
}

/// Parses the text form over `length` register stages. Whitespace is ignored.
pub fn parse_anf(text: &str, length: u32) -> std::result::Result<FilterFunction, AnfParseError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(AnfParseError::Empty);
    }
    let mut set = BTreeSet::new();
    for term in compact.split('+') {
        if term == "1" {
            return Err(AnfParseError::ConstantTerm);
        }
        let mut taps = Vec::new();
        for factor in term.split('*') {
            let tap: u32 = factor
                .strip_prefix('x')
                .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| AnfParseError::Malformed(term.to_string()))?;
            if tap >= length {
                return Err(AnfParseError::TapOutOfRange { tap, length });
            }
            taps.push(tap);
        }
        let m = Monomial::from_taps(&taps)?;
        if !set.insert(m) {
            return Err(AnfParseError::DuplicateMonomial(m.to_string()));
        }
    }
    let order = set.iter().map(Monomial::degree).max().expect("non-empty");
    Ok(FilterFunction {
        length,
        order,
        monomials: set,
    })
}

pub(crate) fn check_order(length: u32, order: u32) -> Result<()> {
    if order == 0 || order > length {
        return Err(Error::OrderOutOfRange { length, order });
    }
    Ok(())
}

/// nfk: number of order-`k` filter functions over `L` stages,
/// `(2^C(L,k) - 1) · 2^(C(L,k-1) + ... + C(L,1))`.
pub fn count_filters(length: u32, order: u32) -> Result<UBig> {
    check_order(length, order)?;
    let top = binomial(length, order);
    let lower = nk(length, order - 1)?;
    let bits = &top + &lower;
    if bits > UBig::from(MAX_COUNT_BITS) {
        return Err(Error::ExactInfeasible {
            bits: bits.to_string(),
            budget: MAX_COUNT_BITS,
        });
    }
    let top: usize = top.try_into().expect("bounded above");
    let lower: usize = lower.try_into().expect("bounded above");
    Ok((pow2(top) - UBig::ONE) << lower)
}

/// All degree-`d` monomials over `length` stages in lexicographic tap order.
pub fn monomials_of_degree(length: u32, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    if d == 0 || d > length || length > 64 {
        return out;
    }
    let mut idx: Vec<u32> = (0..d).collect();
    loop {
        out.push(Monomial(idx.iter().fold(0, |m, &t| m | 1 << t)));
        // advance to the next combination
        let Some(i) = (0..d as usize).rev().find(|&i| idx[i] < length - d + i as u32) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..d as usize {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn monomial_lists(length: u32, order: u32) -> Result<(Vec<Monomial>, Vec<Monomial>)> {
    check_order(length, order)?;
    let total = nk(length, order)?;
    if length > 64 || total > UBig::from(MAX_SAMPLED_MONOMIALS) {
        return Err(Error::LengthTooLarge {
            length,
            max: 20,
            what: "explicit monomial lists",
        });
    }
    let top = monomials_of_degree(length, order);
    let lower = (1..order)
        .flat_map(|d| monomials_of_degree(length, d))
        .collect();
    Ok((top, lower))
}

/// Uniform draw from the order-`k` filter space: the degree-`k` part is a
/// uniform nonempty subset, every lower-degree monomial is an independent fair coin.
pub fn random_filter<R: Rng + ?Sized>(length: u32, order: u32, rng: &mut R) -> Result<FilterFunction> {
    let (top, lower) = monomial_lists(length, order)?;
    let mut chosen = Vec::new();
    loop {
        chosen.clear();
        chosen.extend(top.iter().filter(|_| rng.gen::<bool>()).copied());
        if !chosen.is_empty() {
            break;
        }
    }
    chosen.extend(lower.iter().filter(|_| rng.gen::<bool>()).copied());
    FilterFunction::new(length, chosen)
}

/// Indexed walk over the whole order-`k` filter space.
///
/// Index `i` maps to the degree-`k` mask `(i >> b) + 1` and the lower-degree
/// mask `i & (2^b - 1)`, `b = N_{k-1}`; bit `j` of a mask selects the `j`-th
/// monomial of that degree band in canonical order. Any index range can be
/// walked independently.
#[derive(Clone, Debug)]
pub struct FilterEnumerator {
    length: u32,
    top: Vec<Monomial>,
    lower: Vec<Monomial>,
    count: u64,
}

impl FilterEnumerator {
    pub fn new(length: u32, order: u32) -> Result<Self> {
        Self::with_cap(length, order, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(length: u32, order: u32, cap: u64) -> Result<Self> {
        check_order(length, order)?;
        let over = |count: String| Error::EnumerationCap { count, cap };
        let count = match count_filters(length, order) {
            Ok(c) => c,
            Err(Error::ExactInfeasible { bits, .. }) => return Err(over(format!("2^{bits}"))),
            Err(e) => return Err(e),
        };
        if count > UBig::from(cap) {
            return Err(over(count.to_string()));
        }
        let (top, lower) = monomial_lists(length, order)?;
        Ok(Self {
            length,
            top,
            lower,
            count: count.try_into().expect("below cap"),
        })
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn get(&self, index: u64) -> Option<FilterFunction> {
        if index >= self.count {
            return None;
        }
        let b = self.lower.len();
        let top_mask = (index >> b) + 1;
        let lower_mask = index & ((1u64 << b) - 1);
        let pick = |list: &[Monomial], mask: u64| {
            list.iter()
                .enumerate()
                .filter(move |(j, _)| mask >> j & 1 == 1)
                .map(|(_, m)| *m)
                .collect::<Vec<_>>()
        };
        let mut ms = pick(&self.top, top_mask);
        ms.extend(pick(&self.lower, lower_mask));
        Some(FilterFunction::new(self.length, ms).expect("valid by construction"))
    }

    pub fn range(&self, range: std::ops::Range<u64>) -> impl Iterator<Item = FilterFunction> + '_ {
        let end = range.end.min(self.count);
        (range.start..end).map(move |i| self.get(i).expect("in range"))
    }

    pub fn iter(&self) -> impl Iterator<Item = FilterFunction> + '_ {
        self.range(0..self.count)
    }
}
