//! Fibonacci LFSR producing the m-sequence `a_n = Tr(c·α^n)`.
//!
//! Stage `i` of the register holds `a_{n+i}`; the output cell is stage 0 and
//! the feedback computes `a_{n+L} = Σ_{i<L} f_i·a_{n+i}` from the coefficients
//! `f_i` of the modulus below degree `L`.

use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};

/// `len` consecutive bits `(a_n, ..., a_{n+len-1})`, bit `i` holding `a_{n+i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BitWindow {
    bits: u64,
    len: u32,
}

impl BitWindow {
    pub fn new(bits: u64, len: u32) -> Self {
        assert!(len <= 64);
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Self {
            bits: bits & mask,
            len,
        }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        assert!(bits.len() <= 64, "window wider than 64 bits");
        let packed = bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b & 1) as u64) << i);
        Self::new(packed, bits.len() as u32)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: u32) -> u8 {
        ((self.bits >> i) & 1) as u8
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct LfsrGenerator {
    ctx: FieldContext,
    taps: u64,
    state: u64,
    initial_state: u64,
    // c with a_n = Tr(c·α^n) for the initial state
    phase: u64,
}

impl LfsrGenerator {
    /// Generator with the canonical seed `(1, 0, ..., 0)`.
    pub fn new(ctx: &FieldContext) -> Result<Self> {
        Self::with_seed(ctx, 1)
    }

    /// Generator whose stage `i` initially holds bit `i` of `seed`.
    pub fn with_seed(ctx: &FieldContext, seed: u64) -> Result<Self> {
        ctx.require_verified()?;
        let l = ctx.length();
        let mask = ctx.order_u64();
        if seed == 0 || seed & !mask != 0 {
            return Err(Error::InvalidState { length: l });
        }
        let taps = (ctx.modulus_bits() as u64) & mask;
        let initial: Vec<u8> = (0..l).map(|i| ((seed >> i) & 1) as u8).collect();
        let phase = solve_phase(ctx, &initial).expect("trace form is nondegenerate");
        Ok(Self {
            ctx: ctx.clone(),
            taps,
            state: seed,
            initial_state: seed,
            phase,
        })
    }

    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn length(&self) -> u32 {
        self.ctx.length()
    }

    pub fn state(&self) -> BitWindow {
        BitWindow::new(self.state, self.length())
    }

    pub fn initial_state(&self) -> BitWindow {
        BitWindow::new(self.initial_state, self.length())
    }

    /// 2^L - 1.
    pub fn period(&self) -> u64 {
        self.ctx.order_u64()
    }

    pub fn reset(&mut self) {
        self.state = self.initial_state;
    }

    #[inline]
    fn step(&mut self) -> u8 {
        let out = (self.state & 1) as u8;
        let fb = (self.state & self.taps).count_ones() as u64 & 1;
        self.state = (self.state >> 1) | fb << (self.length() - 1);
        out
    }

    pub fn next_bit(&mut self) -> u8 {
        self.step()
    }

    /// The next `len` output bits, advancing the register.
    pub fn take_bits(&mut self, len: usize) -> Vec<u8> {
        (0..len).map(|_| self.step()).collect()
    }

    /// `len` bits from the initial state, without touching the cursor.
    pub fn output(&self, len: usize) -> Vec<u8> {
        let mut g = self.clone();
        g.reset();
        g.take_bits(len)
    }

    /// One full period of the sequence from the initial state.
    pub fn period_bits(&self) -> Vec<u8> {
        self.output(self.period() as usize)
    }

    /// `(a_n, ..., a_{n+L-1})` counted from the initial state. Computed by a
    /// field jump `a_{n+i} = Tr(c·α^(n+i))`, so the cursor is untouched.
    pub fn window(&self, n: u64) -> BitWindow {
        let ctx = &self.ctx;
        let mut beta = ctx.mul_bits(self.phase, ctx.pow_bits(2, (n % self.period()) as u128));
        let mut bits = 0u64;
        for i in 0..self.length() {
            bits |= (ctx.trace_bits(beta) as u64) << i;
            beta = ctx.mul_bits(beta, 2);
        }
        BitWindow::new(bits, self.length())
    }

    /// All windows over one period, in order, as packed masks.
    pub fn period_windows(&self) -> Vec<u64> {
        let mut g = self.clone();
        g.reset();
        (0..self.period())
            .map(|_| {
                let w = g.state;
                g.step();
                w
            })
            .collect()
    }

    /// The nonzero `c` with `a_n = Tr(c·α^n)` for the initial phase.
    pub fn phase(&self) -> FieldElement {
        self.ctx.wrap(self.phase)
    }

    /// True iff one period of the output equals `Tr(c·α^n)` for some nonzero `c`.
    pub fn trace_consistency(&self) -> bool {
        trace_representation(&self.ctx, &self.period_bits()).is_some()
    }
}

/// Finds the nonzero `c` with `seq[n] = Tr(c·α^n)` for every `n`, if any.
pub fn trace_representation(ctx: &FieldContext, seq: &[u8]) -> Option<FieldElement> {
    let l = ctx.length() as usize;
    if seq.len() < l {
        return None;
    }
    let c = solve_phase(ctx, &seq[..l])?;
    if c == 0 {
        return None;
    }
    let mut beta = c;
    for &bit in seq {
        if ctx.trace_bits(beta) != bit & 1 {
            return None;
        }
        beta = ctx.mul_bits(beta, 2);
    }
    Some(ctx.wrap(c))
}

/// Solves `Tr(c·α^i) = prefix[i]` for `i < L` by Gaussian elimination.
fn solve_phase(ctx: &FieldContext, prefix: &[u8]) -> Option<u64> {
    let l = ctx.length() as usize;
    // row i: bit b = Tr(x^b·α^i) = Tr(α^(b+i)); the rhs rides in bit l
    let powers: Vec<u64> = std::iter::successors(Some(1u64), |&p| Some(ctx.mul_bits(p, 2)))
        .take(2 * l)
        .collect();
    let mut rows: Vec<u128> = (0..l)
        .map(|i| {
            let lhs = (0..l).fold(0u128, |acc, b| {
                acc | (ctx.trace_bits(powers[b + i]) as u128) << b
            });
            lhs | ((prefix[i] & 1) as u128) << l
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(l);
    for col in 0..l {
        let Some(r) = (pivot_row..l).find(|&r| rows[r] >> col & 1 == 1) else {
            continue;
        };
        rows.swap(pivot_row, r);
        for r in 0..l {
            if r != pivot_row && rows[r] >> col & 1 == 1 {
                rows[r] ^= rows[pivot_row];
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if pivots.len() < l {
        return None;
    }
    Some(
        pivots
            .iter()
            .enumerate()
            .fold(0u64, |c, (r, &col)| c | ((rows[r] >> l & 1) as u64) << col),
    )
}
