mod common;

use std::cmp::Ordering;

use dashu_int::UBig;
use dashu_ratio::RBig;
use filtropt::experiment::run_exhaustive;
use filtropt::likelihood::{
    chain_comparison, ln_pr, nfm, pr_exact, pr_report, pr_report_with, HighPrecision, Mode, ReportOptions,
};

fn pow2m1(r: u32) -> UBig {
    (UBig::ONE << r as usize) - UBig::ONE
}

#[test]
fn prime_lengths_collapse() {
    // Pr = (1 - 2^-L)^N / (1 - 2^-C(L,k)) when every cardinal is L
    for (l, k, n, top) in [(3u32, 2u32, 2usize, 3u32), (5, 2, 3, 10), (7, 3, 9, 35), (7, 2, 4, 21)] {
        let lhs = pr_exact(l, k).unwrap();
        let num = pow2m1(l).pow(n) * (UBig::ONE << top as usize);
        let den = (UBig::ONE << (l as usize * n)) * pow2m1(top);
        assert_eq!(lhs, RBig::from_parts(num.into(), den), "L={l} k={k}");
    }
}

#[test]
fn formula_matches_census() {
    for (l, k) in [(2, 1), (3, 1), (3, 2), (3, 3), (4, 1), (4, 2), (4, 3), (4, 4), (5, 2), (6, 1)] {
        let s = run_exhaustive(l, k, &common::ctx(l)).unwrap();
        assert_eq!(UBig::from(s.hits_max_lc), nfm(l, k).unwrap(), "L={l} k={k}");
    }
}

#[test]
fn log_domain_agrees_with_exact() {
    for (l, k) in [(8u32, 4u32), (11, 5), (16, 8), (20, 10)] {
        let r = pr_report(l, k).unwrap();
        assert_eq!(r.mode, Mode::Exact);
        let exact = r.pr_exact.clone().unwrap();
        let (num, den) = exact.into_parts();
        let from_ratio = HighPrecision::from_ubig_ratio(&num.try_into().unwrap(), &den);
        let ln = ln_pr(l, k).unwrap();
        assert!(ln.exp().agrees_to(&from_ratio, 100), "L={l} k={k}");
    }
}

#[test]
fn large_lengths_use_logs() {
    let r = pr_report(257, 128).unwrap();
    assert_eq!(r.mode, Mode::LogDomain);
    assert!(r.nfm.is_none() && r.pr_exact.is_none());
    assert_eq!(r.nk_value, (UBig::ONE << 256) - UBig::ONE);
    assert!(r.pr_float > HighPrecision::from_ratio(998, 1000));
    assert!(r.pr_exceeds_bound_chain);
    assert!(!r.bound_chain_exceeds_bound_general);
    let opts = ReportOptions { force_exact: true, ..Default::default() };
    assert!(pr_report_with(257, 128, opts).is_err());
}

#[test]
fn orderings() {
    // Pr above (1-2^-L)^(N_k/L) at prime L; the exponential approximation is above both here
    for l in [5u32, 7, 13, 31, 61, 127] {
        let c = chain_comparison(l, l.div_ceil(2)).unwrap();
        assert_eq!(c.pr_vs_chain, Ordering::Greater);
        assert_eq!(c.chain_vs_general, Ordering::Less);
        assert_eq!(c.pr_vs_general, Ordering::Less, "L={l}");
    }
    // tiny cases where the top-degree correction dominates
    assert_eq!(chain_comparison(3, 2).unwrap().pr_vs_general, Ordering::Greater);
    assert_eq!(chain_comparison(2, 1).unwrap().pr_vs_general, Ordering::Greater);
}

#[test]
fn direct_values_agree_with_certified_orderings() {
    for (l, k) in [(4u32, 2u32), (5, 2), (7, 3), (9, 4), (12, 6)] {
        let r = pr_report(l, k).unwrap();
        let direct = r.pr_float.sub(&r.bound_general).signum() == Ordering::Greater;
        assert_eq!(direct, r.pr_exceeds_bound_general, "L={l} k={k}");
        let direct = r.pr_float.sub(&r.bound_chain).signum() == Ordering::Greater;
        assert_eq!(direct, r.pr_exceeds_bound_chain, "L={l} k={k}");
    }
}
