//! Empirical counterpart of the likelihood module: the fraction of
//! order-`k` filters whose output reaches linear complexity `N_k`, measured
//! over the whole filter space or over seeded uniform samples.
//!
//! Every trial is a pure function of `(L, k, seed, index)`, and totals are
//! plain sums, so results do not depend on the worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::anf::{format_anf, random_filter, FilterEnumerator, FilterFunction, DEFAULT_ENUMERATION_CAP};
use crate::complexity::{linear_complexity_periodic, min_period};
use crate::cosets::nk;
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::lfsr::LfsrGenerator;
use crate::likelihood::{pr_report, LikelihoodReport};
use crate::spectral::{dft, lc_from_spectrum, period_from_spectrum};

/// Largest `L` the experiment runs at (one period is `2^L - 1` bits).
pub const MAX_EXPERIMENT_LENGTH: u32 = 16;

/// Spectral cross-checks are on by default up to this `L`.
pub const SPECTRAL_CHECK_LENGTH: u32 = 11;

pub const DEFAULT_TRIALS: u64 = 20_000;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Seed of trial `index`: the SplitMix64 output for counter `index + 1`
/// started at `seed`.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Wilson score interval for `hits` successes in `trials`.
pub fn wilson_interval(hits: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// One standard deviation implied by the 95% Wilson interval.
pub fn wilson_sigma(hits: u64, trials: u64) -> f64 {
    let (lo, hi) = wilson_interval(hits, trials, Z_95);
    (hi - lo) / (2.0 * Z_95)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentMode {
    Exhaustive,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub index: u64,
    pub filter_anf: String,
    pub lc: u64,
    pub period: u64,
    pub is_max: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSummary {
    #[serde(rename = "L")]
    pub length: u32,
    #[serde(rename = "k")]
    pub order: u32,
    pub mode: ExperimentMode,
    pub trials: u64,
    pub hits_max_lc: u64,
    pub hits_max_period: u64,
    /// Max-lc filters whose period was not `2^L - 1`.
    pub max_lc_without_max_period: u64,
    pub max_lc_target: u64,
    pub max_period_target: u64,
    pub empirical_pr: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci_low: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci_high: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub analytic_pr: f64,
    pub z_score: f64,
    /// Trials where BM and min_period were checked against the spectrum.
    pub spectral_checked: u64,
    pub spectral_mismatches: u64,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

#[derive(Clone, Debug)]
pub struct ExperimentOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Defaults to `L <= SPECTRAL_CHECK_LENGTH`.
    pub spectral_check: Option<bool>,
    pub keep_records: bool,
    pub enumeration_cap: u64,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        Self {
            jobs: None,
            spectral_check: None,
            keep_records: false,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

struct Outcome {
    lc: u64,
    period: u64,
    spectral: Option<bool>,
    anf: Option<String>,
}

struct Runner<'a> {
    ctx: &'a FieldContext,
    windows: Vec<u64>,
    spectral: bool,
    keep: bool,
}

impl Runner<'_> {
    fn trial(&self, f: &FilterFunction) -> Result<Outcome> {
        let z = f.apply_windows(&self.windows);
        let lc = linear_complexity_periodic(&z)? as u64;
        let period = min_period(&z) as u64;
        let spectral = if self.spectral {
            let s = dft(&z, self.ctx)?;
            Some(lc_from_spectrum(&s) == lc && period_from_spectrum(&s)? == period)
        } else {
            None
        };
        Ok(Outcome {
            lc,
            period,
            spectral,
            anf: self.keep.then(|| format_anf(f)),
        })
    }
}

fn check_setup(length: u32, order: u32, ctx: &FieldContext) -> Result<()> {
    crate::anf::check_order(length, order)?;
    if length > MAX_EXPERIMENT_LENGTH {
        return Err(Error::LengthTooLarge {
            length,
            max: MAX_EXPERIMENT_LENGTH,
            what: "experiments",
        });
    }
    if ctx.length() != length {
        return Err(Error::LengthMismatch {
            expected: length as usize,
            found: ctx.length() as usize,
        });
    }
    ctx.require_verified()
}

fn in_pool<T: Send>(jobs: Option<usize>, work: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(work()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Io(e.to_string()))?;
            Ok(pool.install(work))
        }
    }
}

fn runner<'a>(length: u32, ctx: &'a FieldContext, opts: &ExperimentOptions) -> Result<Runner<'a>> {
    let gen = LfsrGenerator::new(ctx)?;
    Ok(Runner {
        ctx,
        windows: gen.period_windows(),
        spectral: opts.spectral_check.unwrap_or(length <= SPECTRAL_CHECK_LENGTH),
        keep: opts.keep_records,
    })
}

pub fn run_exhaustive(length: u32, order: u32, ctx: &FieldContext) -> Result<ExperimentSummary> {
    run_exhaustive_with(length, order, ctx, &ExperimentOptions::default())
}

pub fn run_exhaustive_with(
    length: u32,
    order: u32,
    ctx: &FieldContext,
    opts: &ExperimentOptions,
) -> Result<ExperimentSummary> {
    check_setup(length, order, ctx)?;
    let space = FilterEnumerator::with_cap(length, order, opts.enumeration_cap)?;
    let r = runner(length, ctx, opts)?;
    let outcomes = in_pool(opts.jobs, || {
        (0..space.len())
            .into_par_iter()
            .map(|i| r.trial(&space.get(i).expect("index in range")))
            .collect::<Result<Vec<_>>>()
    })??;
    summarize(length, order, ExperimentMode::Exhaustive, None, outcomes)
}

pub fn run_monte_carlo(
    length: u32,
    order: u32,
    trials: u64,
    seed: u64,
    ctx: &FieldContext,
) -> Result<ExperimentSummary> {
    run_monte_carlo_with(length, order, trials, seed, ctx, &ExperimentOptions::default())
}

pub fn run_monte_carlo_with(
    length: u32,
    order: u32,
    trials: u64,
    seed: u64,
    ctx: &FieldContext,
    opts: &ExperimentOptions,
) -> Result<ExperimentSummary> {
    check_setup(length, order, ctx)?;
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let r = runner(length, ctx, opts)?;
    let outcomes = in_pool(opts.jobs, || {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, i));
                r.trial(&random_filter(length, order, &mut rng)?)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    summarize(length, order, ExperimentMode::MonteCarlo, Some(seed), outcomes)
}

fn summarize(
    length: u32,
    order: u32,
    mode: ExperimentMode,
    seed: Option<u64>,
    outcomes: Vec<Outcome>,
) -> Result<ExperimentSummary> {
    let target: u64 = nk(length, order)?.try_into().expect("L <= 16");
    let max_period = (1u64 << length) - 1;
    let trials = outcomes.len() as u64;
    let (mut hits, mut hits_period, mut exceptions, mut checked, mut mismatches) = (0, 0, 0, 0, 0);
    let mut records = Vec::new();
    for (i, o) in outcomes.into_iter().enumerate() {
        let is_max = o.lc == target;
        hits += is_max as u64;
        hits_period += (o.period == max_period) as u64;
        exceptions += (is_max && o.period != max_period) as u64;
        if let Some(ok) = o.spectral {
            checked += 1;
            mismatches += !ok as u64;
        }
        if let Some(anf) = o.anf {
            records.push(TrialRecord {
                index: i as u64,
                filter_anf: anf,
                lc: o.lc,
                period: o.period,
                is_max,
            });
        }
    }
    let analytic_pr = pr_report(length, order)?.pr_float.to_f64();
    let empirical_pr = hits as f64 / trials as f64;
    let (ci_low, ci_high) = match mode {
        ExperimentMode::MonteCarlo => {
            let (lo, hi) = wilson_interval(hits, trials, Z_95);
            (Some(lo), Some(hi))
        }
        ExperimentMode::Exhaustive => (None, None),
    };
    Ok(ExperimentSummary {
        length,
        order,
        mode,
        trials,
        hits_max_lc: hits,
        hits_max_period: hits_period,
        max_lc_without_max_period: exceptions,
        max_lc_target: target,
        max_period_target: max_period,
        empirical_pr,
        ci_low,
        ci_high,
        seed,
        analytic_pr,
        z_score: z_score(hits, trials, analytic_pr),
        spectral_checked: checked,
        spectral_mismatches: mismatches,
        records,
    })
}

/// `(empirical - analytic) / σ` with σ from the Wilson interval, which
/// stays positive when every trial hits.
pub fn z_score(hits: u64, trials: u64, analytic: f64) -> f64 {
    let empirical = hits as f64 / trials as f64;
    if empirical == analytic {
        return 0.0;
    }
    (empirical - analytic) / wilson_sigma(hits, trials)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    /// Exhaustive runs: `hits_max_lc == nfm`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_match: Option<bool>,
    /// Monte Carlo runs: `|z_score| <= 3`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within_3_sigma: Option<bool>,
    /// `empirical_pr + 3σ > bound_general`.
    pub bound_respected: bool,
    /// `empirical_pr > bound_general` with no slack.
    pub strictly_above_bound_general: bool,
}

impl Verdict {
    /// The gate used for exit codes: exact or statistical agreement.
    pub fn passed(&self) -> bool {
        self.exact_match.unwrap_or(true) && self.within_3_sigma.unwrap_or(true)
    }
}

pub fn compare(summary: &ExperimentSummary, report: &LikelihoodReport) -> Result<Verdict> {
    if (summary.length, summary.order) != (report.length, report.order) {
        return Err(Error::ParameterMismatch(summary.length, summary.order, report.length, report.order));
    }
    let bound = report.bound_general.to_f64();
    let sigma = wilson_sigma(summary.hits_max_lc, summary.trials);
    let (exact_match, within_3_sigma) = match summary.mode {
        ExperimentMode::Exhaustive => {
            let m = report.nfm.as_ref().map(|n| *n == summary.hits_max_lc.into());
            (Some(m.unwrap_or(false)), None)
        }
        ExperimentMode::MonteCarlo => {
            let z = z_score(summary.hits_max_lc, summary.trials, report.pr_float.to_f64());
            (None, Some(z.abs() <= 3.0))
        }
    };
    Ok(Verdict {
        exact_match,
        within_3_sigma,
        bound_respected: summary.empirical_pr + 3.0 * sigma > bound,
        strictly_above_bound_general: summary.empirical_pr > bound,
    })
}
