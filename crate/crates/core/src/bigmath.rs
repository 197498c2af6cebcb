//! Big-integer combinatorics and high-precision real helpers.

use dashu_float::{round::mode::HalfEven, FBig};
use std::fmt;

use dashu_int::{IBig, UBig};

/// Binary float used for every log-domain evaluation.
pub(crate) type Real = FBig<HalfEven, 2>;

/// Working precision in bits (about 192 decimal digits).
pub const PRECISION_BITS: usize = 640;

pub(crate) fn binomial(n: u32, k: u32) -> UBig {
    if k > n {
        return UBig::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = UBig::ONE;
    for i in 0..k {
        acc = acc * UBig::from(n - i) / UBig::from(i + 1);
    }
    acc
}

pub(crate) fn pow2(e: usize) -> UBig {
    UBig::ONE << e
}

pub(crate) fn real_from_ubig(v: &UBig) -> Real {
    Real::from(v.clone()).with_precision(PRECISION_BITS).value()
}

pub(crate) fn real_from_u64(v: u64) -> Real {
    Real::from(v).with_precision(PRECISION_BITS).value()
}

/// `2^-e` at working precision.
pub(crate) fn pow2_neg(e: usize) -> Real {
    Real::from_parts(IBig::ONE, -(e as isize))
        .with_precision(PRECISION_BITS)
        .value()
}

/// `ln(1 - 2^-r)`.
pub(crate) fn ln_one_minus_pow2_neg(r: usize) -> Real {
    (-pow2_neg(r)).ln_1p()
}

/// Approximate `log2 |x|` (`None` for zero).
pub(crate) fn log2_magnitude(x: &Real) -> Option<isize> {
    let r = x.repr();
    if r.significand().is_zero() {
        None
    } else {
        Some(r.exponent() + r.digits() as isize)
    }
}

/// `ln(1 - x) + x = -Σ_{m>=2} x^m/m` for `x = 2^-r`, summed without cancellation.
pub(crate) fn ln_one_minus_pow2_neg_plus_x(r: usize) -> Real {
    let x = pow2_neg(r);
    let mut power = &x * &x;
    let mut sum = &power / &real_from_u64(2);
    let floor = log2_magnitude(&sum).expect("nonzero") - PRECISION_BITS as isize - 8;
    for m in 3u64.. {
        power = &power * &x;
        let term = &power / &real_from_u64(m);
        if log2_magnitude(&term).is_none_or(|e| e < floor) {
            break;
        }
        sum += term;
    }
    -sum
}

/// Decimal rendering with `digits` significant digits, in scientific
/// notation outside roughly `[1e-12, 1e30)`.
pub(crate) fn to_decimal_string(x: &Real, digits: usize) -> String {
    let d = x.to_decimal().value();
    let d = d.with_precision(digits).value();
    match log2_magnitude(x) {
        Some(e) if !(-40..100).contains(&e) => format!("{d:e}"),
        _ => d.to_string(),
    }
}

pub(crate) fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

pub(crate) fn ser_display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn ser_opt_display<T: fmt::Display, S: serde::Serializer>(v: &Option<T>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}
