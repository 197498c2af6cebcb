//! Probability that a uniformly chosen order-`k` filter is optimal.
//!
//! With cosets of weight `1..=k` having cardinals `r_i`,
//!
//! ```text
//! nfm = Π_i (2^r_i - 1)
//! nfk = (2^C(L,k) - 1) · 2^(C(L,k-1) + ... + C(L,1))
//! Pr  = nfm / nfk
//! ln Pr = Σ_i ln(1 - 2^-r_i) - ln(1 - 2^-C(L,k))
//! ```
//!
//! (the second form uses `Σ r_i = N_k`). Alongside `Pr` the report carries
//! `(1 - 2^-L)^(N_k/L)`, which `Pr` exceeds for prime `L`, the first-order
//! approximation `e^(-N_k/(2^L·L))`, and the heuristic `e^(-1/(2L))`.
//! Note that `(1 - x)^a < e^(-a·x)`: the approximation sits slightly *above*
//! the chain value and is not itself a lower bound of `Pr`.
//!
//! Small cases are done in exact big-integer arithmetic; beyond
//! [`EXACT_BIT_BUDGET`] every quantity is evaluated in the log domain with
//! [`PRECISION_BITS`]-bit binary floats.

use std::cmp::Ordering;
use std::fmt;

use dashu_float::ops::Abs;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use serde::{Serialize, Serializer};

use crate::anf::{check_order, count_filters};
use crate::bigmath::{
    binomial, ln_one_minus_pow2_neg, ln_one_minus_pow2_neg_plus_x, log2_magnitude, pow2, pow2_neg,
    real_from_u64, real_from_ubig, to_decimal_string, Real,
};
pub use crate::bigmath::PRECISION_BITS;
use crate::cosets::{cardinal_counts, n_cosets, nk};
use crate::error::{Error, Result};

/// Largest `log2(nfk)` (= `N_k`) handled in exact arithmetic.
pub const EXACT_BIT_BUDGET: u64 = 1 << 20;

/// Significant decimal digits written for high-precision values.
pub const REPORT_DIGITS: usize = 60;

// above this C(L,k), 2^-C(L,k) is kept symbolic
const SYMBOLIC_TAIL_BITS: u64 = 1 << 40;

/// A real number carried at [`PRECISION_BITS`] bits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HighPrecision(pub(crate) Real);

impl HighPrecision {
    pub fn from_ratio(num: u64, den: u64) -> Self {
        Self(real_from_u64(num) / real_from_u64(den))
    }

    pub fn from_ubig_ratio(num: &UBig, den: &UBig) -> Self {
        Self(real_from_ubig(num) / real_from_ubig(den))
    }

    pub fn to_f64(&self) -> f64 {
        crate::bigmath::to_f64(&self.0)
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        to_decimal_string(&self.0, digits)
    }

    pub fn exp(&self) -> Self {
        Self(self.0.exp())
    }

    pub fn ln(&self) -> Self {
        Self(self.0.ln())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn signum(&self) -> Ordering {
        self.0.cmp(&real_from_u64(0))
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == Ordering::Equal
    }

    /// `|self - other| <= |other| · 10^-digits`.
    pub fn agrees_to(&self, other: &Self, digits: u32) -> bool {
        let diff = (&self.0 - &other.0).abs();
        let scale = real_from_ubig(&UBig::from(10u8).pow(digits as usize));
        diff * scale <= other.0.clone().abs()
    }
}

impl fmt::Display for HighPrecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(REPORT_DIGITS))
    }
}

impl Serialize for HighPrecision {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_decimal(REPORT_DIGITS))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    LogDomain,
}

/// nfm: order-`k` filters whose output has maximum linear complexity,
/// i.e. every coset of weight `1..=k` has a nonzero coefficient.
pub fn nfm(length: u32, order: u32) -> Result<UBig> {
    check_order(length, order)?;
    require_exact(length, order)?;
    Ok(cardinal_counts(length, order)?
        .into_iter()
        .map(|(r, count)| {
            let c: usize = count.try_into().expect("within exact budget");
            (pow2(r as usize) - UBig::ONE).pow(c)
        })
        .product())
}

fn require_exact(length: u32, order: u32) -> Result<()> {
    let bits = nk(length, order)?;
    if bits > UBig::from(EXACT_BIT_BUDGET) {
        return Err(Error::ExactInfeasible {
            bits: bits.to_string(),
            budget: EXACT_BIT_BUDGET,
        });
    }
    Ok(())
}

/// `nfm / nfk` in lowest terms.
pub fn pr_exact(length: u32, order: u32) -> Result<RBig> {
    let num = nfm(length, order)?;
    let den = count_filters(length, order)?;
    Ok(RBig::from_parts(IBig::from(num), den))
}

/// Pieces of `ln Pr` and of the comparison chain, evaluated separately so
/// that signs of tiny differences are computed without cancellation.
struct LogTerms {
    nk: UBig,
    // Σ c_r ln(1 - 2^-r)
    ln_nfm_ratio: Real,
    // Σ_{r<L} c_r [ln(1 - 2^-r) - (r/L) ln(1 - 2^-L)]; None when no r < L
    mixed_cardinals: Option<Real>,
    // -ln(1 - 2^-C(L,k)); None when below 2^-2^40
    top_correction: Option<Real>,
    // (N_k / L) ln(1 - 2^-L)
    ln_chain: Real,
    // (N_k / L) (ln(1 - 2^-L) + 2^-L)
    chain_minus_general: Real,
    // -N_k / (2^L L)
    ln_general: Real,
}

fn log_terms(length: u32, order: u32) -> Result<LogTerms> {
    check_order(length, order)?;
    let l = length as usize;
    let nk_value = nk(length, order)?;
    let binom_top = binomial(length, order);
    let counts = cardinal_counts(length, order)?;
    let ln_chain_unit = ln_one_minus_pow2_neg(l);
    let len_real = real_from_u64(length as u64);

    let mut ln_nfm_ratio = real_from_u64(0);
    let mut mixed = None::<Real>;
    for (&r, count) in &counts {
        let term = ln_one_minus_pow2_neg(r as usize);
        let c = real_from_ubig(count);
        ln_nfm_ratio += &c * &term;
        if r < length {
            let bracket = term - &ln_chain_unit * real_from_u64(r as u64) / &len_real;
            let add = c * bracket;
            mixed = Some(match mixed {
                Some(m) => m + add,
                None => add,
            });
        }
    }
    let top_correction = if binom_top <= UBig::from(SYMBOLIC_TAIL_BITS) {
        let c: usize = binom_top.clone().try_into().expect("bounded");
        Some(-ln_one_minus_pow2_neg(c))
    } else {
        None
    };
    let nk_over_l = real_from_ubig(&nk_value) / &len_real;
    let ln_chain = &nk_over_l * &ln_chain_unit;
    let chain_minus_general = &nk_over_l * ln_one_minus_pow2_neg_plus_x(l);
    let ln_general = -(&nk_over_l * pow2_neg(l));
    Ok(LogTerms {
        nk: nk_value,
        ln_nfm_ratio,
        mixed_cardinals: mixed,
        top_correction,
        ln_chain,
        chain_minus_general,
        ln_general,
    })
}

impl LogTerms {
    fn ln_pr(&self) -> Real {
        match &self.top_correction {
            Some(t) => &self.ln_nfm_ratio + t,
            None => self.ln_nfm_ratio.clone(),
        }
    }

    /// Sign of `known + top_correction`, where the correction is positive.
    fn sign_with_correction(&self, known: Option<Real>, what: &'static str) -> Result<Ordering> {
        let zero = real_from_u64(0);
        match (&self.top_correction, known) {
            (_, None) => Ok(Ordering::Greater),
            (Some(t), Some(k)) => {
                let sum = &k + t;
                let big = log2_magnitude(&k).max(log2_magnitude(t)).unwrap_or(0);
                match log2_magnitude(&sum) {
                    Some(e) if e > big - (PRECISION_BITS as isize - 40) => Ok(sum.cmp(&zero)),
                    _ => Err(Error::Undecidable(what)),
                }
            }
            (None, Some(k)) => {
                // correction < 2^(1 - C(L,k)) with C(L,k) > 2^40
                match log2_magnitude(&k) {
                    Some(e) if (e as i128) > 2 - SYMBOLIC_TAIL_BITS as i128 => Ok(k.cmp(&zero)),
                    Some(_) => Err(Error::Undecidable(what)),
                    None => Ok(Ordering::Greater),
                }
            }
        }
    }
}

/// Certified orderings between `Pr`, `(1-2^-L)^(N_k/L)` and `e^(-N_k/(2^L L))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComparison {
    /// `Pr` vs `(1 - 2^-L)^(N_k/L)`.
    pub pr_vs_chain: Ordering,
    /// `(1 - 2^-L)^(N_k/L)` vs `e^(-N_k/(2^L·L))`.
    pub chain_vs_general: Ordering,
    /// `Pr` vs `e^(-N_k/(2^L·L))`.
    pub pr_vs_general: Ordering,
    /// `ln(1 - 2^-L)^(N_k/L) - (-N_k/(2^L·L))`, always negative.
    pub ln_chain_minus_general: HighPrecision,
}

pub fn chain_comparison(length: u32, order: u32) -> Result<ChainComparison> {
    let t = log_terms(length, order)?;
    compare_terms(&t)
}

fn compare_terms(t: &LogTerms) -> Result<ChainComparison> {
    let zero = real_from_u64(0);
    let pr_vs_chain = t.sign_with_correction(t.mixed_cardinals.clone(), "ln Pr - ln chain")?;
    let chain_vs_general = t.chain_minus_general.cmp(&zero);
    let known = match &t.mixed_cardinals {
        Some(m) => m + &t.chain_minus_general,
        None => t.chain_minus_general.clone(),
    };
    let pr_vs_general = t.sign_with_correction(Some(known), "ln Pr - ln general")?;
    Ok(ChainComparison {
        pr_vs_chain,
        chain_vs_general,
        pr_vs_general,
        ln_chain_minus_general: HighPrecision(t.chain_minus_general.clone()),
    })
}

/// `ln Pr` by log-domain evaluation, any `L`.
pub fn ln_pr(length: u32, order: u32) -> Result<HighPrecision> {
    Ok(HighPrecision(log_terms(length, order)?.ln_pr()))
}

/// `e^(-1/(2L))`.
pub fn bound_asymptotic(length: u32) -> HighPrecision {
    HighPrecision((-(real_from_u64(1) / real_from_u64(2 * length as u64))).exp())
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    /// Fail instead of falling back to the log domain.
    pub force_exact: bool,
    /// Report `e^(-1/(2L))` for any `k`.
    pub asymptotic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LikelihoodReport {
    pub length: u32,
    pub order: u32,
    pub mode: Mode,
    pub prime_length: bool,
    /// N, the number of cosets of weight `1..=k`.
    #[serde(serialize_with = "crate::bigmath::ser_display")]
    pub n_cosets: UBig,
    /// N_k, the maximum linear complexity.
    #[serde(serialize_with = "crate::bigmath::ser_display")]
    pub nk_value: UBig,
    #[serde(serialize_with = "crate::bigmath::ser_opt_display")]
    pub nfm: Option<UBig>,
    #[serde(serialize_with = "crate::bigmath::ser_opt_display")]
    pub nfk: Option<UBig>,
    pub log2_nfm: HighPrecision,
    pub log2_nfk: HighPrecision,
    #[serde(serialize_with = "crate::bigmath::ser_opt_display")]
    pub pr_exact: Option<RBig>,
    pub ln_pr: HighPrecision,
    pub pr_float: HighPrecision,
    /// `(1 - 2^-L)^(N_k/L)`.
    pub bound_chain: HighPrecision,
    /// `e^(-N_k/(2^L·L))`.
    pub bound_general: HighPrecision,
    /// `e^(-1/(2L))`, for `k` near `L/2` or on request.
    pub bound_asymptotic: Option<HighPrecision>,
    pub pr_exceeds_bound_chain: bool,
    pub bound_chain_exceeds_bound_general: bool,
    pub pr_exceeds_bound_general: bool,
    pub precision_bits: usize,
    pub significant_digits: usize,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

pub fn pr_report(length: u32, order: u32) -> Result<LikelihoodReport> {
    pr_report_with(length, order, ReportOptions::default())
}

pub fn pr_report_with(length: u32, order: u32, opts: ReportOptions) -> Result<LikelihoodReport> {
    check_order(length, order)?;
    let t = log_terms(length, order)?;
    let exact = t.nk <= UBig::from(EXACT_BIT_BUDGET);
    if opts.force_exact && !exact {
        require_exact(length, order)?;
    }
    let cmp = compare_terms(&t)?;
    let ln2 = real_from_u64(2).ln();
    let nk_real = real_from_ubig(&t.nk);
    let log2_nfm = &nk_real + &t.ln_nfm_ratio / &ln2;
    let log2_nfk = match &t.top_correction {
        Some(c) => &nk_real - c / &ln2,
        None => nk_real.clone(),
    };

    let ln_pr = t.ln_pr();
    let (mode, nfm_v, nfk_v, pr_exact_v, pr_float) = if exact {
        let num = nfm(length, order)?;
        let den = count_filters(length, order)?;
        let pr = RBig::from_parts(IBig::from(num.clone()), den.clone());
        let float = real_from_ubig(&num) / real_from_ubig(&den);
        (Mode::Exact, Some(num), Some(den), Some(pr), float)
    } else {
        (Mode::LogDomain, None, None, None, ln_pr.exp())
    };

    let near_half = order == length / 2 || order == length.div_ceil(2);
    Ok(LikelihoodReport {
        length,
        order,
        mode,
        prime_length: is_prime(length),
        n_cosets: n_cosets(length, order)?,
        nk_value: t.nk.clone(),
        nfm: nfm_v,
        nfk: nfk_v,
        log2_nfm: HighPrecision(log2_nfm),
        log2_nfk: HighPrecision(log2_nfk),
        pr_exact: pr_exact_v,
        ln_pr: HighPrecision(ln_pr),
        pr_float: HighPrecision(pr_float),
        bound_chain: HighPrecision(t.ln_chain.exp()),
        bound_general: HighPrecision(t.ln_general.exp()),
        bound_asymptotic: (near_half || opts.asymptotic).then(|| bound_asymptotic(length)),
        pr_exceeds_bound_chain: cmp.pr_vs_chain == Ordering::Greater,
        bound_chain_exceeds_bound_general: cmp.chain_vs_general == Ordering::Greater,
        pr_exceeds_bound_general: cmp.pr_vs_general == Ordering::Greater,
        precision_bits: PRECISION_BITS,
        significant_digits: REPORT_DIGITS,
    })
}

impl LikelihoodReport {
    /// `ln e^(-N_k/(2^L·L))`, i.e. `-N_k/(2^L·L)`.
    pub fn ln_bound_general(&self) -> HighPrecision {
        let l = self.length as usize;
        HighPrecision(-(real_from_ubig(&self.nk_value) / real_from_u64(self.length as u64) * pow2_neg(l)))
    }

    /// The report's own `binom(L, k)`, the size of the top degree band.
    pub fn top_band(&self) -> UBig {
        binomial(self.length, self.order)
    }
}
