//! `naqc` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad arguments,
//! 3 I/O failure, 4 no threshold crossing.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coherence::{complementarity_sum, CoherenceMeasure};
use crate::error::Error;
use crate::naqc::{self, max_alices, sequential_naqc, ScenarioConfig};
use crate::oracle;
use crate::quantum::{random_qubit_state_with, singlet, Sharpness};
use crate::verify::{self, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_BAD_ARGS: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NO_CROSSING: i32 = 4;

/// Longest chain accepted by `sweep`.
pub const MAX_SWEEP_CHAIN: usize = 4;

#[derive(Debug, Parser)]
#[command(name = "naqc", version, about = "Sequential sharing of nonlocal advantage of quantum coherence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Averaged NAQC value of the last Alice in a sharpness chain on the singlet.
    Compute {
        #[arg(long)]
        measure: CoherenceMeasure,
        /// Comma-separated sharpness values λ₁,…,λₙ.
        #[arg(long, value_delimiter = ',', required = true)]
        chain: Vec<f64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Grid sweep over the sharpness of every Alice in the chain.
    Sweep {
        #[arg(long)]
        measure: CoherenceMeasure,
        /// `lo:hi:step` (or a single value), one per Alice in chain order.
        #[arg(long = "range", required = true)]
        ranges: Vec<GridRange>,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sharpness at which an Alice's averaged NAQC value crosses the bound.
    Threshold {
        #[arg(long)]
        measure: CoherenceMeasure,
        /// 1-based index of the Alice whose threshold is solved.
        #[arg(long, default_value_t = 1)]
        alice: usize,
        /// Fixed sharpness values of the preceding Alices.
        #[arg(long, value_delimiter = ',')]
        chain: Vec<f64>,
    },
    /// Run the self-check suite.
    Verify {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 10_000)]
        channel_samples: usize,
        #[arg(long, default_value_t = 2019)]
        seed: u64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Largest number of Alices that can all demonstrate NAQC.
    MaxAlices {
        /// All three measures when omitted.
        #[arg(long)]
        measure: Option<CoherenceMeasure>,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Sample random qubit states and check the complementarity bound.
    ComplementaritySample {
        /// All three measures when omitted.
        #[arg(long)]
        measure: Option<CoherenceMeasure>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-state CSV (`x,y,z,<measure sums>`); summary only when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Inclusive grid `lo, lo+step, …, hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridRange {
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| {
                let v = self.lo + i as f64 * self.step;
                if i + 1 == count && (v - self.hi).abs() < 1e-9 {
                    self.hi
                } else {
                    v.min(self.hi)
                }
            })
            .collect()
    }
}

impl FromStr for GridRange {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidConfig(format!("invalid range {s:?}; expected lo:hi:step or a single value"));
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let range = match parts.as_slice() {
            [v] => GridRange { lo: *v, hi: *v, step: 1.0 },
            [lo, hi, step] => GridRange { lo: *lo, hi: *hi, step: *step },
            _ => return Err(bad()),
        };
        let in_unit = |x: f64| x > 0.0 && x <= 1.0;
        if !(in_unit(range.lo) && in_unit(range.hi) && range.lo <= range.hi && range.step > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "range {s:?} must satisfy 0 < lo <= hi <= 1 and step > 0"
            )));
        }
        Ok(range)
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub lambdas: Vec<f64>,
    pub value: f64,
    pub bound: f64,
    pub violated: bool,
}

/// Decimal rendering with `digits` significant digits and trailing zeros
/// removed, switching to exponent form outside `[1e-5, 1e12)`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    // rounding can carry into the next decade
    let sci = format!("{:.*e}", digits.saturating_sub(1), x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let exponent = exponent.max(exp);
    if !(-5..12).contains(&exponent) {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Value after a round trip through 12-significant-digit text.
fn rounded(x: f64) -> f64 {
    format_sig(x, 12).parse().unwrap_or(x)
}

pub fn evaluate(measure: CoherenceMeasure, lambdas: &[f64]) -> Result<RunRecord, Error> {
    let config = ScenarioConfig::from_values(lambdas, measure)?;
    let result = sequential_naqc(&singlet(), &config)?;
    Ok(RunRecord {
        lambdas: lambdas.to_vec(),
        value: result.value,
        bound: result.bound,
        violated: result.violated,
    })
}

pub fn csv_header(chain_len: usize) -> String {
    let mut cols: Vec<String> = (1..=chain_len).map(|k| format!("lambda{k}")).collect();
    cols.extend(["value", "bound", "violated"].map(String::from));
    cols.join(",")
}

pub fn csv_row(record: &RunRecord) -> String {
    let mut cols: Vec<String> = record.lambdas.iter().map(|&l| format_sig(l, 12)).collect();
    cols.push(format_sig(record.value, 12));
    cols.push(format_sig(record.bound, 12));
    cols.push(record.violated.to_string());
    cols.join(",")
}

pub fn render_csv(records: &[RunRecord], chain_len: usize) -> String {
    let mut out = csv_header(chain_len);
    out.push('\n');
    for r in records {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    out
}

fn for_json(record: &RunRecord) -> RunRecord {
    RunRecord {
        lambdas: record.lambdas.iter().map(|&l| rounded(l)).collect(),
        value: rounded(record.value),
        bound: rounded(record.bound),
        violated: record.violated,
    }
}

pub fn render_json(records: &[RunRecord]) -> String {
    let rounded: Vec<RunRecord> = records.iter().map(for_json).collect();
    let mut s = serde_json::to_string_pretty(&rounded).expect("plain data serialises");
    s.push('\n');
    s
}

/// Cartesian product of the ranges, first parameter varying slowest.
pub fn sweep_points(ranges: &[GridRange]) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::new()];
    for r in ranges {
        let values = r.values();
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    points
}

pub fn run_sweep(measure: CoherenceMeasure, ranges: &[GridRange]) -> Result<Vec<RunRecord>, Error> {
    if ranges.len() > MAX_SWEEP_CHAIN {
        return Err(Error::InvalidConfig(format!(
            "chain length {} exceeds {MAX_SWEEP_CHAIN}",
            ranges.len()
        )));
    }
    if let Some(pos) = ranges[..ranges.len().saturating_sub(1)].iter().position(|r| r.hi >= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "range {} belongs to a predecessor Alice and must stay below 1",
            pos + 1
        )));
    }
    sweep_points(ranges)
        .par_iter()
        .map(|p| evaluate(measure, p))
        .collect()
}

enum Failure {
    BadArgs(String),
    Io(String),
    NoCrossing(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoSignChange { .. } => Failure::NoCrossing(e.to_string()),
            other => Failure::BadArgs(other.to_string()),
        }
    }
}

fn io_err(e: std::io::Error) -> Failure {
    Failure::Io(e.to_string())
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(io_err),
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_BAD_ARGS
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::BadArgs(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_BAD_ARGS
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_IO
        }
        Err(Failure::NoCrossing(msg)) => {
            let _ = writeln!(
                err,
                "error: no threshold crossing in (0, 1]: {msg}; this Alice cannot reach the bound with these predecessors"
            );
            EXIT_NO_CROSSING
        }
        Err(Failure::Verification) => {
            let _ = writeln!(err, "verification failed");
            EXIT_VERIFY_FAILED
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Compute { measure, chain, format } => {
            let record = evaluate(measure, &chain)?;
            let text = match format {
                OutputFormat::Csv => render_csv(std::slice::from_ref(&record), chain.len()),
                OutputFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&for_json(&record)).expect("plain data");
                    s.push('\n');
                    s
                }
            };
            emit(out, None, &text)
        }
        Command::Sweep { measure, ranges, format, out: path } => {
            let records = run_sweep(measure, &ranges)?;
            let text = match format {
                OutputFormat::Csv => render_csv(&records, ranges.len()),
                OutputFormat::Json => render_json(&records),
            };
            emit(out, path.as_ref(), &text)
        }
        Command::Threshold { measure, alice, chain } => cmd_threshold(out, measure, alice, &chain),
        Command::Verify { samples, channel_samples, seed, step } => {
            let opts = VerifyOptions {
                samples,
                channel_samples,
                seed,
                grid_step: step,
            };
            let report = verify::run_verification(&opts)?;
            emit(out, None, &verify::render(&report))?;
            if report.all_passed() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::MaxAlices { measure, step } => {
            let measures = measure.map_or(CoherenceMeasure::ALL.to_vec(), |m| vec![m]);
            let mut text = String::new();
            for m in measures {
                let r = max_alices(m, step, true)?;
                text.push_str(&format!("measure: {m}\nmax_alices: {}\n", r.count));
                if r.count >= 2 {
                    let w: Vec<String> = r.witness.iter().map(|&l| format_sig(l, 12)).collect();
                    text.push_str(&format!("witness: {}\n", w.join(",")));
                    text.push_str(&format!("witness_margin: {}\n", format_sig(r.witness_margin, 12)));
                    if let Some((lo, hi)) = r.lambda1_window {
                        text.push_str(&format!("lambda1_window: {lo:.9},{hi:.9}\n"));
                    }
                }
            }
            emit(out, None, &text)
        }
        Command::ComplementaritySample { measure, samples, seed, out: path } => {
            cmd_complementarity(out, measure, samples, seed, path.as_ref())
        }
    }
}

fn cmd_threshold(out: &mut dyn Write, measure: CoherenceMeasure, alice: usize, chain: &[f64]) -> Result<(), Failure> {
    if alice == 0 {
        return Err(Failure::BadArgs("--alice is 1-based".into()));
    }
    if chain.len() != alice - 1 {
        return Err(Failure::BadArgs(format!(
            "Alice {alice} needs {} fixed predecessor values in --chain, got {}",
            alice - 1,
            chain.len()
        )));
    }
    let preds = chain
        .iter()
        .map(|&l| Sharpness::new(l))
        .collect::<Result<Vec<_>, _>>()?;
    let threshold = naqc::threshold_simulated(measure, &preds)?;
    let closed = if alice == 1 { oracle::alice1_closed_form(measure) } else { None };
    let mut text = format!("measure: {measure}\nalice: {alice}\n");
    if !chain.is_empty() {
        let c: Vec<String> = chain.iter().map(|&l| format_sig(l, 12)).collect();
        text.push_str(&format!("predecessors: {}\n", c.join(",")));
    }
    text.push_str(&format!("threshold: {threshold:.9}\n"));
    if let Some(cf) = closed {
        text.push_str(&format!("closed_form: {} = {:.9}\n", cf.expression, cf.value));
    }
    emit(out, None, &text)
}

fn cmd_complementarity(
    out: &mut dyn Write,
    measure: Option<CoherenceMeasure>,
    samples: usize,
    seed: u64,
    path: Option<&PathBuf>,
) -> Result<(), Failure> {
    if samples == 0 {
        return Err(Failure::BadArgs("--samples must be positive".into()));
    }
    let measures = measure.map_or(CoherenceMeasure::ALL.to_vec(), |m| vec![m]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<_> = (0..samples).map(|_| random_qubit_state_with(&mut rng)).collect();
    let sums: Vec<Vec<f64>> = states
        .par_iter()
        .map(|rho| measures.iter().map(|&m| complementarity_sum(rho, m)).collect())
        .collect::<Result<_, _>>()?;

    let mut text = String::from("measure,samples,seed,max_sum,bound,exceeding\n");
    for (k, m) in measures.iter().enumerate() {
        let max = sums.iter().map(|s| s[k]).fold(f64::NEG_INFINITY, f64::max);
        let exceeding = sums.iter().filter(|s| s[k] > m.bound() + 1e-9).count();
        text.push_str(&format!(
            "{m},{samples},{seed},{},{},{exceeding}\n",
            format_sig(max, 12),
            format_sig(m.bound(), 12)
        ));
    }
    emit(out, None, &text)?;

    if let Some(p) = path {
        let mut csv = String::from("x,y,z");
        for m in &measures {
            csv.push_str(&format!(",{m}"));
        }
        csv.push('\n');
        for (rho, s) in states.iter().zip(&sums) {
            let r = rho.bloch()?;
            let mut cols: Vec<String> = r.iter().map(|&x| format_sig(x, 12)).collect();
            cols.extend(s.iter().map(|&v| format_sig(v, 12)));
            csv.push_str(&cols.join(","));
            csv.push('\n');
        }
        emit(out, Some(p), &csv)?;
    }
    Ok(())
}
