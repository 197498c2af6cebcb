//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines always show. The
//! process fails if a gated criterion fails. The second half of criterion 9
//! (`(1-2^-L)^(N_k/L) > e^(-N_k/(2^L·L))`) is false for every `L` because
//! `ln(1-x) < -x`; it is reported as FAIL and not gated, while the gate checks
//! that the library reports the true ordering.

mod common;

use std::cmp::Ordering;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use filtropt::complexity::{berlekamp_massey, linear_complexity_periodic, min_period};
use filtropt::anf::random_filter;
use filtropt::experiment::{
    compare, run_exhaustive_with, run_monte_carlo_with, ExperimentOptions, ExperimentSummary,
};
use filtropt::field::table::PolyTable;
use filtropt::lfsr::LfsrGenerator;
use filtropt::likelihood::{bound_asymptotic, chain_comparison, pr_exact, pr_report, HighPrecision};
use filtropt::spectral::{dft, lc_from_spectrum, period_from_spectrum, reconstruct_period, verify_subfield};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    gated: bool,
    detail: String,
}

fn line(n: u32, o: &Outcome, took: Duration) {
    let status = if o.pass { "PASS" } else { "FAIL" };
    let note = if o.gated { "" } else { " [not gated]" };
    println!("criterion {n}: {status}{note} ({:.2?}) {}", took, o.detail);
}

fn single_worker() -> ExperimentOptions {
    ExperimentOptions {
        jobs: Some(1),
        ..Default::default()
    }
}

fn census(l: u32, k: u32, trials: u64, hits: u64, limit: Duration) -> (Outcome, ExperimentSummary) {
    let t = Instant::now();
    let s = run_exhaustive_with(l, k, &common::ctx(l), &single_worker()).unwrap();
    let took = t.elapsed();
    let report = pr_report(l, k).unwrap();
    let v = compare(&s, &report).unwrap();
    let exact_pr = pr_exact(l, k).unwrap();
    let empirical = dashu_ratio::RBig::from_parts(s.hits_max_lc.into(), s.trials.into());
    let pass = s.trials == trials
        && s.hits_max_lc == hits
        && dashu_int::UBig::from(s.max_lc_target) == filtropt::cosets::nk(l, k).unwrap()
        && v.exact_match == Some(true)
        && empirical == exact_pr
        && took < limit;
    let detail = format!(
        "L={l} k={k}: {} filters, {} with lc {}, Pr {} vs formula {} (limit {:?})",
        s.trials, s.hits_max_lc, s.max_lc_target, empirical, exact_pr, limit
    );
    (Outcome { pass, gated: true, detail }, s)
}

fn criterion_4(runs: &[ExperimentSummary]) -> Outcome {
    let bad: u64 = runs.iter().map(|s| s.max_lc_without_max_period).sum();
    let ordered = runs.iter().all(|s| s.hits_max_period >= s.hits_max_lc);
    let detail = runs
        .iter()
        .map(|s| format!("L={} {}/{} max-lc at period {}", s.length, s.hits_max_lc - s.max_lc_without_max_period, s.hits_max_lc, s.max_period_target))
        .collect::<Vec<_>>()
        .join(", ");
    Outcome {
        pass: bad == 0 && ordered,
        gated: true,
        detail: format!("{detail}; exceptions {bad}"),
    }
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let s = run_monte_carlo_with(7, 3, 20_000, 2024, &common::ctx(7), &Default::default()).unwrap();
    let report = pr_report(7, 3).unwrap();
    let v = compare(&s, &report).unwrap();
    let took = t.elapsed();
    Outcome {
        pass: v.within_3_sigma == Some(true) && v.bound_respected && took < Duration::from_secs(60),
        gated: true,
        detail: format!(
            "empirical {:.6} [{:.6}, {:.6}], Pr {:.6}, z {:.3}; bound_general {:.6}, above within 3 sigma: {}, strictly above: {}",
            s.empirical_pr,
            s.ci_low.unwrap(),
            s.ci_high.unwrap(),
            report.pr_float.to_f64(),
            s.z_score,
            report.bound_general.to_f64(),
            v.bound_respected,
            v.strictly_above_bound_general
        ),
    }
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let r = pr_report(257, 128).unwrap();
    let above = r.pr_float > HighPrecision::from_ratio(998, 1000);
    let asym = r.bound_asymptotic.clone().expect("k = floor(L/2)");
    let asym_ok = (asym.to_f64() - 0.998057).abs() < 1e-6;
    let ln_general = r.ln_bound_general();
    let agree = r.ln_pr.agrees_to(&ln_general, 30);
    let direct = r.ln_pr.sub(&ln_general).signum();
    let certified = if r.pr_exceeds_bound_general { Ordering::Greater } else { Ordering::Less };
    let took = t.elapsed();
    Outcome {
        pass: above && asym_ok && agree && direct == certified && took < Duration::from_secs(5),
        gated: true,
        detail: format!(
            "Pr = {} (> 0.998: {above}); e^(-1/514) = {} (|d| < 1e-6 from 0.998057: {asym_ok}); ln Pr = {}, ln bound = {}, 30 digits: {agree}; ordering direct {direct:?} certified {certified:?}",
            r.pr_float.to_decimal(20),
            asym.to_decimal(12),
            r.ln_pr.to_decimal(35),
            ln_general.to_decimal(35)
        ),
    }
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for l in [5u32, 7, 11] {
        let ctx = common::ctx(l);
        let windows = LfsrGenerator::new(&ctx).unwrap().period_windows();
        let mut rng = ChaCha8Rng::seed_from_u64(7000 + l as u64);
        for i in 0..200 {
            let k = rng.gen_range(1..=l);
            let f = random_filter(l, k, &mut rng).unwrap();
            let z = f.apply_windows(&windows);
            let s = dft(&z, &ctx).unwrap();
            let lc = linear_complexity_periodic(&z).unwrap() as u64;
            let ok = lc == lc_from_spectrum(&s)
                && min_period(&z) as u64 == period_from_spectrum(&s).unwrap()
                && verify_subfield(&s)
                && reconstruct_period(&s).unwrap() == z;
            checked += 1;
            if !ok {
                failures.push(format!("L={l} #{i} {f}"));
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        gated: true,
        detail: if failures.is_empty() {
            format!("{checked}/{checked} filters agree")
        } else {
            format!("{}/{checked} filters agree; failing: {}", checked - failures.len(), failures.join("; "))
        },
    }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut agree = 0;
    let mut max_lc = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=48);
        // mix dense, sparse and periodic strings so low complexities show up
        let s: Vec<u8> = match rng.gen_range(0..3) {
            0 => (0..n).map(|_| rng.gen_range(0..2)).collect(),
            1 => (0..n).map(|_| (rng.gen_range(0..8) == 0) as u8).collect(),
            _ => {
                let p = rng.gen_range(1..=8);
                let base: Vec<u8> = (0..p).map(|_| rng.gen_range(0..2)).collect();
                (0..n).map(|i| base[i % p]).collect()
            }
        };
        let bm = berlekamp_massey(&s).lc;
        max_lc = max_lc.max(bm);
        agree += (bm == common::shortest_lfsr(&s)) as u32;
    }
    Outcome {
        pass: agree == 500,
        gated: true,
        detail: format!("{agree}/500 strings agree with the exhaustive search (largest lc {max_lc})"),
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

fn criterion_9() -> Outcome {
    let table = PolyTable::embedded();
    let primes: Vec<u32> = table.lengths().filter(|&l| is_prime(l) && l <= 257).collect();
    let mut pr_over_chain = true;
    let mut chain_over_general = true;
    let mut reports_truth = true;
    let mut notes = Vec::new();
    for &l in &primes {
        let k = l.div_ceil(2);
        let c = chain_comparison(l, k).unwrap();
        let r = pr_report(l, k).unwrap();
        pr_over_chain &= c.pr_vs_chain == Ordering::Greater && r.pr_exceeds_bound_chain;
        chain_over_general &= c.chain_vs_general == Ordering::Greater;
        // ln chain - ln general = (N_k/L)(ln(1-x) + x) < 0 for 0 < x < 1
        reports_truth &= c.chain_vs_general == Ordering::Less
            && c.ln_chain_minus_general.signum() == Ordering::Less
            && !r.bound_chain_exceeds_bound_general;
        if l == 5 || l == 257 {
            notes.push(format!(
                "L={l}: ln chain - ln general = {}",
                c.ln_chain_minus_general.to_decimal(6)
            ));
        }
    }
    let asym: Vec<HighPrecision> = primes.iter().map(|&l| bound_asymptotic(l)).collect();
    let increasing = asym.windows(2).all(|w| w[0] < w[1]);
    let pass = pr_over_chain && chain_over_general && increasing;
    Outcome {
        pass,
        gated: false,
        detail: format!(
            "{} primes up to 257, k = ceil(L/2): Pr > chain {pr_over_chain}, chain > general {chain_over_general}, e^(-1/(2L)) increasing {increasing}; {}; library reports chain < general: {reports_truth}",
            primes.len(),
            notes.join(", ")
        ),
    }
}

fn main() -> ExitCode {
    let mut all_gated_pass = true;
    let mut record = |n: u32, o: Outcome, took: Duration| {
        line(n, &o, took);
        if o.gated {
            all_gated_pass &= o.pass;
        }
    };

    let t = Instant::now();
    let (o1, s1) = census(3, 2, 56, 49, Duration::from_secs(1));
    record(1, o1, t.elapsed());
    let t = Instant::now();
    let (o2, s2) = census(5, 2, 32736, 29791, Duration::from_secs(30));
    record(2, o2, t.elapsed());
    let t = Instant::now();
    let (o3, s3) = census(4, 2, 1008, 675, Duration::from_secs(30));
    record(3, o3, t.elapsed());
    record(4, criterion_4(&[s1, s2, s3]), Duration::ZERO);

    for (n, f) in [
        (5, criterion_5 as fn() -> Outcome),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ] {
        let t = Instant::now();
        let o = f();
        record(n, o, t.elapsed());
    }

    // criterion 9 as stated is not gated; its provable parts are
    let t = Instant::now();
    let o9 = criterion_9();
    let table = PolyTable::embedded();
    let provable = table
        .lengths()
        .filter(|&l| is_prime(l) && l <= 257)
        .all(|l| {
            let c = chain_comparison(l, l.div_ceil(2)).unwrap();
            c.pr_vs_chain == Ordering::Greater && c.chain_vs_general == Ordering::Less
        });
    record(9, o9, t.elapsed());
    all_gated_pass &= provable;

    if all_gated_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
