//! The `filtropt` command line.
//!
//! Exit status: 0 on success, 1 on invalid input (the message names the
//! offending flag), 2 when a run completes but its comparison against the
//! analytic value fails.

mod render;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use filtropt::anf::{parse_anf, FilterFunction};
use filtropt::complexity::{berlekamp_massey, linear_complexity_periodic, min_period};
use filtropt::cosets::{coset_period, cosets_up_to_weight, nk};
use filtropt::experiment::{
    compare, run_exhaustive_with, run_monte_carlo_with, ExperimentOptions, ExperimentSummary, Verdict,
    DEFAULT_TRIALS,
};
use filtropt::field::table::parse_factor_list;
use filtropt::field::{FieldContext, Gf2Poly, PolyTable};
use filtropt::lfsr::LfsrGenerator;
use filtropt::likelihood::{pr_report_with, HighPrecision, LikelihoodReport, ReportOptions};
use filtropt::spectral::{dft, lc_from_spectrum, period_from_spectrum, MAX_SPECTRAL_LENGTH};
use filtropt::Error;
use serde::Serialize;
use serde_json::Value;

pub use render::flatten;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Parser)]
#[command(name = "filtropt", version, about = "Linear complexity, period and optimality odds of nonlinear LFSR filters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,

    /// Shorthand for `--output json`.
    #[arg(long, global = true, conflicts_with = "output")]
    pub json: bool,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List cyclotomic cosets mod 2^L - 1 with leader weight up to k.
    Cosets {
        #[arg(long)]
        length: u32,
        /// Largest leader weight (default L).
        #[arg(long, visible_alias = "order")]
        max_weight: Option<u32>,
    },
    /// Linear complexity of a bit string.
    Lc {
        /// A string of 0s and 1s, or @path to a file holding one.
        #[arg(long)]
        bits: String,
        /// Treat the bits as one period of a periodic sequence.
        #[arg(long)]
        periodic: bool,
    },
    /// Measure a filter over one period and show its coset spectrum.
    Analyze {
        #[command(flatten)]
        field: FieldArgs,
        /// ANF such as "x0*x1 + x3", a JSON monomial list, or @path.
        #[arg(long)]
        filter: String,
    },
    /// Probability that a uniform order-k filter has maximum linear complexity.
    Prob {
        #[arg(long)]
        length: u32,
        #[arg(long)]
        order: u32,
        /// Require exact big-integer evaluation.
        #[arg(long)]
        exact: bool,
        /// Always report e^(-1/(2L)).
        #[arg(long)]
        asymptotic: bool,
        /// Exit with status 2 unless Pr exceeds this decimal.
        #[arg(long)]
        assert_min: Option<String>,
    },
    /// Run every filter of order k through the generator.
    Enumerate {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        order: u32,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run uniformly sampled filters of order k through the generator.
    Sample {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        order: u32,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long)]
    pub length: u32,
    /// Primitive polynomial as hex (default: table entry for L).
    #[arg(long)]
    pub poly: Option<String>,
    /// Prime factors of 2^L - 1 with multiplicity, comma separated, or @path.
    #[arg(long)]
    pub factors: Option<String>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Write one CSV row per filter to this file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Invalid input, tied to the flag that caused it when known.
#[derive(Debug)]
pub struct UsageError {
    pub flag: Option<&'static str>,
    pub message: String,
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.flag {
            Some(flag) => write!(f, "{flag}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

fn at(flag: &'static str) -> impl Fn(Error) -> UsageError {
    move |e| UsageError {
        flag: Some(flag),
        message: e.to_string(),
    }
}

fn usage(flag: &'static str, message: impl Into<String>) -> UsageError {
    UsageError {
        flag: Some(flag),
        message: message.into(),
    }
}

/// A finished run: the report and whether its comparison held.
pub struct Report {
    pub value: Value,
    pub passed: bool,
    table: Option<&'static str>,
}

/// `value` or the contents of the file after `@`.
fn inline_or_file(flag: &'static str, value: &str) -> Result<String, UsageError> {
    match value.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| usage(flag, format!("cannot read {path}: {e}"))),
        None => Ok(value.to_string()),
    }
}

fn field_context(args: &FieldArgs) -> Result<FieldContext, UsageError> {
    let table = PolyTable::from_env_or_embedded().map_err(|e| UsageError {
        flag: None,
        message: format!("polynomial table: {e}"),
    })?;
    let l = args.length;
    if l == 0 {
        return Err(usage("--length", "must be at least 1"));
    }
    let entry = table.get(l);
    let factors = match &args.factors {
        Some(text) => {
            let text = inline_or_file("--factors", text)?;
            let joined = text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect::<Vec<_>>().join(",");
            parse_factor_list(&joined).map_err(|m| usage("--factors", m))?
        }
        None => match entry {
            Some(e) => e.factors.clone(),
            None => {
                return Err(usage(
                    "--length",
                    format!("no table entry for L = {l}; pass --poly and --factors"),
                ))
            }
        },
    };
    let poly = match &args.poly {
        Some(hex) => Gf2Poly::from_hex(hex).map_err(at("--poly"))?,
        None => match entry {
            Some(e) => e.poly.clone(),
            None => return Err(usage("--poly", format!("required for L = {l}, which has no table entry"))),
        },
    };
    FieldContext::new(l, &poly, factors).map_err(|e| match e {
        Error::FactorizationMismatch { .. } => at("--factors")(e),
        Error::LengthTooLarge { .. } => at("--length")(e),
        e => at("--poly")(e),
    })
}

fn parse_filter(text: &str, length: u32) -> Result<FilterFunction, UsageError> {
    let text = inline_or_file("--filter", text)?;
    let trimmed = text.trim();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(trimmed).map_err(|e| usage("--filter", format!("invalid JSON: {e}")))?;
        let list = v.get("monomials").cloned().unwrap_or(v);
        let monomials: Vec<Vec<u32>> = serde_json::from_value(list)
            .map_err(|e| usage("--filter", format!("expected a list of tap lists: {e}")))?;
        FilterFunction::from_json_monomials(length, &monomials).map_err(at("--filter"))
    } else {
        parse_anf(trimmed, length).map_err(|e| usage("--filter", e.to_string()))
    }
}

fn parse_bits(text: &str) -> Result<Vec<u8>, UsageError> {
    let text = inline_or_file("--bits", text)?;
    let bits: Vec<u8> = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .enumerate()
        .map(|(i, c)| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(usage("--bits", format!("unexpected {other:?} at position {i}"))),
        })
        .collect::<Result<_, _>>()?;
    if bits.is_empty() {
        return Err(usage("--bits", "empty bit string"));
    }
    Ok(bits)
}

/// Parses a plain decimal like `0.998` into `num / 10^digits`.
fn parse_decimal(text: &str) -> Option<HighPrecision> {
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if int.is_empty() && frac.is_empty() || frac.len() > 18 || !(int.chars().chain(frac.chars())).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let num: u64 = format!("{int}{frac}").parse().ok()?;
    Some(HighPrecision::from_ratio(num, 10u64.pow(frac.len() as u32)))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

#[derive(Serialize)]
struct CosetRow {
    leader: u64,
    cardinal: u32,
    weight: u32,
    period: u64,
}

fn cmd_cosets(length: u32, max_weight: Option<u32>) -> Result<Report, UsageError> {
    let k = max_weight.unwrap_or(length);
    let cosets = cosets_up_to_weight(length, k).map_err(|e| match e {
        Error::OrderOutOfRange { .. } => at("--max-weight")(e),
        e => at("--length")(e),
    })?;
    let rows: Vec<CosetRow> = cosets
        .iter()
        .map(|c| CosetRow {
            leader: c.leader(),
            cardinal: c.cardinal(),
            weight: c.weight(),
            period: coset_period(c, length),
        })
        .collect();
    let total: u64 = rows.iter().map(|r| r.cardinal as u64).sum();
    Ok(Report {
        value: serde_json::json!({
            "L": length,
            "max_weight": k,
            "count": rows.len(),
            "total_cardinal": total,
            "cosets": rows,
        }),
        passed: true,
        table: Some("cosets"),
    })
}

fn cmd_lc(bits: &str, periodic: bool) -> Result<Report, UsageError> {
    let bits = parse_bits(bits)?;
    let r = berlekamp_massey(&bits);
    let mut value = serde_json::json!({
        "n": bits.len(),
        "lc": r.lc,
        "connection_poly": r.connection_poly.to_hex(),
    });
    if periodic {
        let lc = linear_complexity_periodic(&bits).map_err(at("--bits"))?;
        value["periodic_lc"] = lc.into();
        value["min_period"] = min_period(&bits).into();
    }
    Ok(Report {
        value,
        passed: true,
        table: None,
    })
}

#[derive(Serialize)]
struct LineRow {
    leader: u64,
    weight: u32,
    cardinal: u32,
    coefficient_hex: String,
}

fn cmd_analyze(field: &FieldArgs, filter: &str) -> Result<Report, UsageError> {
    if field.length > MAX_SPECTRAL_LENGTH {
        return Err(usage("--length", format!("spectral analysis is limited to L <= {MAX_SPECTRAL_LENGTH}")));
    }
    let ctx = field_context(field)?;
    let f = parse_filter(filter, field.length)?;
    let gen = LfsrGenerator::new(&ctx).map_err(at("--poly"))?;
    let z = f.apply_windows(&gen.period_windows());
    let spectrum = dft(&z, &ctx).map_err(at("--length"))?;
    let lc_bm = linear_complexity_periodic(&z).map_err(at("--filter"))? as u64;
    let max_lc: u64 = nk(field.length, f.order())
        .map_err(at("--filter"))?
        .try_into()
        .expect("L <= 16");
    let lines: Vec<LineRow> = spectrum
        .lines()
        .map(|l| LineRow {
            leader: l.coset.leader(),
            weight: l.coset.weight(),
            cardinal: l.coset.cardinal(),
            coefficient_hex: l.coefficient.to_hex(),
        })
        .collect();
    Ok(Report {
        value: serde_json::json!({
            "L": field.length,
            "poly": ctx.modulus().to_hex(),
            "filter": f.to_string(),
            "order": f.order(),
            "max_lc": max_lc,
            "lc_bm": lc_bm,
            "lc_spectral": lc_from_spectrum(&spectrum),
            "period_measured": min_period(&z),
            "period_spectral": period_from_spectrum(&spectrum).ok(),
            "optimal": lc_bm == max_lc,
            "lines": lines,
        }),
        passed: true,
        table: None,
    })
}

#[derive(Serialize)]
struct Assertion {
    pr_float_above: String,
    holds: bool,
}

#[derive(Serialize)]
struct ProbOutput {
    #[serde(flatten)]
    report: LikelihoodReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    assertion: Option<Assertion>,
}

fn cmd_prob(length: u32, order: u32, exact: bool, asymptotic: bool, assert_min: Option<&str>) -> Result<Report, UsageError> {
    if length == 0 {
        return Err(usage("--length", "must be at least 1"));
    }
    let threshold = assert_min
        .map(|t| parse_decimal(t).ok_or_else(|| usage("--assert-min", format!("not a plain decimal: {t:?}"))))
        .transpose()?;
    let opts = ReportOptions {
        force_exact: exact,
        asymptotic,
    };
    let report = pr_report_with(length, order, opts).map_err(|e| match e {
        Error::ExactInfeasible { .. } => at("--exact")(e),
        Error::OrderOutOfRange { .. } => at("--order")(e),
        e => at("--length")(e),
    })?;
    let assertion = threshold.map(|t| Assertion {
        pr_float_above: assert_min.unwrap_or_default().to_string(),
        holds: report.pr_float > t,
    });
    let passed = assertion.as_ref().is_none_or(|a| a.holds);
    Ok(Report {
        value: to_value(&ProbOutput { report, assertion }),
        passed,
        table: None,
    })
}

#[derive(Serialize)]
struct ExperimentOutput<'a> {
    #[serde(flatten)]
    summary: &'a ExperimentSummary,
    verdict: Verdict,
}

fn experiment_report(summary: ExperimentSummary, csv_path: Option<&PathBuf>) -> Result<Report, UsageError> {
    let analytic = pr_report_with(summary.length, summary.order, ReportOptions::default()).map_err(at("--order"))?;
    let verdict = compare(&summary, &analytic).map_err(at("--order"))?;
    if let Some(path) = csv_path {
        let mut w = csv::Writer::from_path(path).map_err(|e| usage("--csv", e.to_string()))?;
        for r in &summary.records {
            w.serialize(r).map_err(|e| usage("--csv", e.to_string()))?;
        }
        w.flush().map_err(|e| usage("--csv", e.to_string()))?;
    }
    let passed = verdict.passed();
    Ok(Report {
        value: to_value(&ExperimentOutput {
            summary: &summary,
            verdict,
        }),
        passed,
        table: None,
    })
}

fn experiment_options(run: &RunArgs) -> Result<ExperimentOptions, UsageError> {
    if run.jobs == Some(0) {
        return Err(usage("--jobs", "must be at least 1"));
    }
    Ok(ExperimentOptions {
        jobs: run.jobs,
        keep_records: run.csv.is_some(),
        ..Default::default()
    })
}

fn experiment_error(e: Error) -> UsageError {
    match e {
        Error::OrderOutOfRange { .. } | Error::EnumerationCap { .. } => at("--order")(e),
        Error::ZeroTrials => at("--trials")(e),
        e => at("--length")(e),
    }
}

/// Runs one parsed command.
pub fn dispatch(cli: &Cli) -> Result<Report, UsageError> {
    match &cli.command {
        Command::Cosets { length, max_weight } => cmd_cosets(*length, *max_weight),
        Command::Lc { bits, periodic } => cmd_lc(bits, *periodic),
        Command::Analyze { field, filter } => cmd_analyze(field, filter),
        Command::Prob {
            length,
            order,
            exact,
            asymptotic,
            assert_min,
        } => cmd_prob(*length, *order, *exact, *asymptotic, assert_min.as_deref()),
        Command::Enumerate { field, order, run } => {
            let ctx = field_context(field)?;
            let s = run_exhaustive_with(field.length, *order, &ctx, &experiment_options(run)?).map_err(experiment_error)?;
            experiment_report(s, run.csv.as_ref())
        }
        Command::Sample {
            field,
            order,
            trials,
            seed,
            run,
        } => {
            let ctx = field_context(field)?;
            let s = run_monte_carlo_with(field.length, *order, *trials, *seed, &ctx, &experiment_options(run)?)
                .map_err(experiment_error)?;
            experiment_report(s, run.csv.as_ref())
        }
    }
}

/// Parses `args`, runs the command and writes the report. Returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let report = match dispatch(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let format = if cli.json { OutputFormat::Json } else { cli.output };
    let text = render::render(&report.value, format, report.table);
    let written = match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("--out: cannot write {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return 1;
    }
    if report.passed {
        0
    } else {
        2
    }
}
