//! Coset spectrum of a periodic sequence over GF(2^L).
//!
//! A sequence `z` of period dividing `N = 2^L - 1` expands as
//! `z_n = Σ_E Σ_{j<r_E} (C_E·α^(E·n))^(2^j)`, one term per coset with leader
//! `E` and cardinal `r_E`. The coefficient of leader `E` is
//! `C_E = Σ_n z_n·α^(-E·n)`; coefficients of the other members of a coset
//! are Frobenius conjugates of it and are not stored. The linear complexity
//! of `z` is the sum of `r_E` over nonzero `C_E`, and its period is the lcm
//! of the coset periods.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cosets::{all_cosets, coset_of, coset_period, full_weight_coset, gcd, CyclotomicCoset};
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};

/// Largest `L` accepted by the direct O(N^2) transform.
pub const MAX_SPECTRAL_LENGTH: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralLine {
    pub coset: CyclotomicCoset,
    pub coefficient: FieldElement,
}

/// Powers of α and discrete logarithms.
#[derive(Debug)]
struct PowerTable {
    exp: Vec<u64>,
    log: Vec<u32>,
}

impl PowerTable {
    fn new(ctx: &FieldContext) -> Self {
        let n = ctx.order_u64() as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![0u32; n + 1];
        let alpha = ctx.alpha().bits();
        let mut cur = 1u64;
        for i in 0..n {
            exp.push(cur);
            log[cur as usize] = i as u32;
            cur = ctx.mul_bits(cur, alpha);
        }
        Self { exp, log }
    }
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    ctx: FieldContext,
    lines: BTreeMap<u64, SpectralLine>,
    table: Arc<PowerTable>,
}

impl PartialEq for Spectrum {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.lines == other.lines
    }
}

fn check_context(ctx: &FieldContext) -> Result<()> {
    ctx.require_verified()?;
    if ctx.length() > MAX_SPECTRAL_LENGTH {
        return Err(Error::LengthTooLarge {
            length: ctx.length(),
            max: MAX_SPECTRAL_LENGTH,
            what: "spectral analysis",
        });
    }
    Ok(())
}

impl Spectrum {
    /// Builds a spectrum from `(leader, coefficient)` pairs. Leaders must be
    /// coset leaders (or `2^L - 1` for the weight-`L` coset), coefficients nonzero.
    pub fn from_lines(ctx: &FieldContext, lines: impl IntoIterator<Item = (u64, FieldElement)>) -> Result<Self> {
        check_context(ctx)?;
        let n = ctx.order_u64();
        let mut map = BTreeMap::new();
        for (leader, coefficient) in lines {
            let coset = if leader == n {
                full_weight_coset(ctx.length())
            } else {
                coset_of(leader, ctx.length())
                    .map_err(|_| Error::InvalidLine { leader, reason: "not a coset exponent" })?
            };
            if coset.leader() != leader {
                return Err(Error::InvalidLine { leader, reason: "not a coset leader" });
            }
            let coefficient = ctx.add(&ctx.zero(), &coefficient)?;
            if coefficient.is_zero() {
                return Err(Error::InvalidLine { leader, reason: "zero coefficient" });
            }
            map.insert(leader, SpectralLine { coset, coefficient });
        }
        Ok(Self {
            ctx: ctx.clone(),
            lines: map,
            table: Arc::new(PowerTable::new(ctx)),
        })
    }

    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn lines(&self) -> impl Iterator<Item = &SpectralLine> {
        self.lines.values()
    }

    pub fn get(&self, leader: u64) -> Option<&SpectralLine> {
        self.lines.get(&leader)
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Largest coset weight carrying a line (0 when empty).
    pub fn max_weight(&self) -> u32 {
        self.lines().map(|l| l.coset.weight()).max().unwrap_or(0)
    }
}

/// Coset coefficients of one period `z` (length `2^L - 1`).
pub fn dft(z: &[u8], ctx: &FieldContext) -> Result<Spectrum> {
    check_context(ctx)?;
    let n = ctx.order_u64() as usize;
    if z.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: z.len(),
        });
    }
    let table = Arc::new(PowerTable::new(ctx));
    let ones: Vec<usize> = (0..n).filter(|&i| z[i] & 1 == 1).collect();
    let mut lines = BTreeMap::new();
    for coset in all_cosets(ctx.length())? {
        let e = coset.leader() as usize % n;
        let step = (n - e) % n;
        let coeff = ones
            .iter()
            .fold(0u64, |acc, &i| acc ^ table.exp[(i * step) % n]);
        if coeff != 0 {
            lines.insert(
                coset.leader(),
                SpectralLine {
                    coset,
                    coefficient: ctx.wrap(coeff),
                },
            );
        }
    }
    Ok(Spectrum {
        ctx: ctx.clone(),
        lines,
        table,
    })
}

/// `z_n` from the spectrum, evaluated term by term in the field.
pub fn reconstruct(s: &Spectrum, n: u64) -> Result<u8> {
    let ctx = &s.ctx;
    let order = ctx.order_u64();
    let mut total = ctx.zero();
    for line in s.lines() {
        let e = (line.coset.leader() % order) as i128 * (n % order) as i128;
        let mut term = ctx.mul(&line.coefficient, &ctx.pow(&ctx.alpha(), e)?)?;
        let mut inner = ctx.zero();
        for _ in 0..line.coset.cardinal() {
            inner = ctx.add(&inner, &term)?;
            term = ctx.frobenius(&term)?;
        }
        total = ctx.add(&total, &inner)?;
    }
    match total.bits() {
        b @ (0 | 1) => Ok(b as u8),
        _ => Err(Error::NotBinary { index: n }),
    }
}

/// One full period reconstructed with log tables; agrees with [`reconstruct`].
pub fn reconstruct_period(s: &Spectrum) -> Result<Vec<u8>> {
    let n = s.ctx.order_u64() as usize;
    let t = &s.table;
    let mut acc = vec![0u64; n];
    for line in s.lines() {
        let e = line.coset.leader() as usize % n;
        let log_c = t.log[line.coefficient.bits() as usize] as usize;
        let r = line.coset.cardinal();
        for (i, slot) in acc.iter_mut().enumerate() {
            let mut k = (log_c + e * i) % n;
            let mut inner = 0u64;
            for _ in 0..r {
                inner ^= t.exp[k];
                k = (2 * k) % n;
            }
            *slot ^= inner;
        }
    }
    acc.iter()
        .enumerate()
        .map(|(i, &v)| match v {
            0 | 1 => Ok(v as u8),
            _ => Err(Error::NotBinary { index: i as u64 }),
        })
        .collect()
}

/// True iff every coefficient lies in its subfield: `C^(2^r) = C`.
pub fn verify_subfield(s: &Spectrum) -> bool {
    let ctx = &s.ctx;
    s.lines().all(|line| {
        let c = line.coefficient.bits();
        let lifted = (0..line.coset.cardinal()).fold(c, |x, _| ctx.mul_bits(x, x));
        lifted == c
    })
}

/// Linear complexity: sum of the cardinals of the cosets present.
pub fn lc_from_spectrum(s: &Spectrum) -> u64 {
    s.lines().map(|l| l.coset.cardinal() as u64).sum()
}

/// Period: lcm of the periods of the cosets present.
pub fn period_from_spectrum(s: &Spectrum) -> Result<u64> {
    if s.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let l = s.ctx.length();
    Ok(s.lines().fold(1u64, |acc, line| {
        let p = coset_period(&line.coset, l);
        acc / gcd(acc, p) * p
    }))
}
