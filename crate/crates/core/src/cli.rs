//! Command-line harness: `verify` sweeps, `eval`, `stuffle` and `list`.
//!
//! Exit codes: 0 on success, 1 when a sweep has an unexpected failure,
//! 2 on usage or input errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::composition::{parse_word, Composition};
use crate::error::{Error, Result};
use crate::evaluator::{eval, Mode, SumFamily};
use crate::registry::{
    catalog, run_sweep, CatalogConfig, CheckResult, CongruenceCheck, Status, SweepOptions,
};
use crate::residue::primes_between;
use crate::stuffle::stuffle_product;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "amhs",
    version,
    about = "Alternating multiple harmonic sums and their congruences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run catalog checks over a range of primes, one JSON record per line.
    Verify(VerifyArgs),
    /// Evaluate a single sum exactly or modulo p^k.
    Eval(EvalArgs),
    /// Expand the stuffle product of two words.
    Stuffle {
        #[arg(allow_hyphen_values = true)]
        w1: String,
        #[arg(allow_hyphen_values = true)]
        w2: String,
    },
    /// Print catalog ids.
    List {
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[arg(long, default_value_t = 6)]
        weight_cap: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    /// Inclusive prime range `LO..HI` (or a single prime).
    #[arg(long, default_value = "7..100")]
    pub primes: String,
    /// Family or id prefix such as `C04` or `C04.a1`; repeatable. Default: all.
    #[arg(long = "suite")]
    pub suites: Vec<String>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    pub weight_cap: u64,
    /// Cap every check's modulus power at p^K.
    #[arg(long)]
    pub power: Option<u32>,
    /// Report zero timings so reports are byte-identical across runs.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    /// H, S, U or V.
    pub family: String,
    /// Comma-separated signed parts, e.g. `1,-3`.
    #[arg(allow_hyphen_values = true)]
    pub composition: String,
    pub n: u64,
    #[arg(long)]
    pub prime: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub power: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub prime_lo: u64,
    pub prime_hi: u64,
    /// Empty means every family.
    pub suites: Vec<String>,
    pub power_override: Option<u32>,
    pub jobs: usize,
    pub seed: u64,
    pub weight_cap: u64,
    pub timing: bool,
    pub out: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            prime_lo: 7,
            prime_hi: 100,
            suites: Vec::new(),
            power_override: None,
            jobs: 1,
            seed: 0,
            weight_cap: 6,
            timing: true,
            out: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.prime_lo < 7 {
            return Err(Error::InvalidArgument(format!(
                "prime range must start at 7 or above, got {}",
                self.prime_lo
            )));
        }
        if self.prime_lo > self.prime_hi {
            return Err(Error::InvalidArgument(format!(
                "empty prime range {}..{}",
                self.prime_lo, self.prime_hi
            )));
        }
        if self.jobs == 0 {
            return Err(Error::InvalidArgument("--jobs must be at least 1".into()));
        }
        if self.power_override == Some(0) {
            return Err(Error::InvalidArgument("--power must be at least 1".into()));
        }
        Ok(())
    }

    fn selects(&self, id: &str) -> bool {
        self.suites.is_empty() || self.suites.iter().any(|s| suite_matches(s, id))
    }
}

fn suite_matches(suite: &str, id: &str) -> bool {
    if suite.eq_ignore_ascii_case("all") {
        return true;
    }
    id.strip_prefix(suite)
        .is_some_and(|rest| rest.is_empty() || rest.starts_with('.') || suite.ends_with('.'))
}

/// Parses `LO..HI`, `LO..=HI` or a single number.
pub fn parse_prime_range(text: &str) -> Result<(u64, u64)> {
    let bad = |reason: &str| Error::Parse {
        input: text.into(),
        reason: reason.into(),
    };
    let num = |s: &str| s.trim().parse::<u64>().map_err(|e| bad(&e.to_string()));
    match text.split_once("..") {
        Some((lo, hi)) => Ok((num(lo)?, num(hi.strip_prefix('=').unwrap_or(hi))?)),
        None => {
            let p = num(text)?;
            Ok((p, p))
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub wall_ms: u64,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub records: Vec<CheckResult>,
    pub summary: Summary,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            EXIT_FAIL
        } else {
            EXIT_OK
        }
    }

    pub fn write_jsonl(&self, out: &mut dyn Write) -> io::Result<()> {
        for r in &self.records {
            let rec = Record {
                id: &r.id,
                p: r.p,
                k: r.k,
                lhs: r.lhs.map(|v| v.value().to_string()),
                rhs: r.rhs.map(|v| v.value().to_string()),
                status: r.status,
                elapsed_us: r.elapsed_us,
            };
            writeln!(out, "{}", serde_json::to_string(&rec)?)?;
        }
        writeln!(
            out,
            "{}",
            serde_json::to_string(&SummaryLine {
                summary: self.summary
            })?
        )
    }
}

/// One report line; residues are decimal strings since `p^k` may exceed 2^53.
#[derive(Serialize)]
struct Record<'a> {
    id: &'a str,
    p: u64,
    k: u32,
    lhs: Option<String>,
    rhs: Option<String>,
    status: Status,
    elapsed_us: u64,
}

#[derive(Serialize)]
struct SummaryLine {
    summary: Summary,
}

/// Runs `checks` (filtered by the configured suites) over the configured primes.
pub fn cmd_verify_with(checks: &[CongruenceCheck], cfg: &SweepConfig) -> Result<Report> {
    cfg.validate()?;
    let selected: Vec<CongruenceCheck> = checks
        .iter()
        .filter(|c| cfg.selects(&c.id))
        .cloned()
        .collect();
    let primes = primes_between(cfg.prime_lo, cfg.prime_hi);
    let start = Instant::now();
    let opts = SweepOptions {
        jobs: cfg.jobs,
        power_cap: cfg.power_override,
        timing: cfg.timing,
    };
    let records = run_sweep(&selected, &primes, opts)?;
    let count = |s: Status| records.iter().filter(|r| r.status == s).count();
    let summary = Summary {
        total: records.len(),
        pass: count(Status::Pass),
        fail: count(Status::Fail),
        skipped: count(Status::Skipped),
        wall_ms: if cfg.timing {
            start.elapsed().as_millis() as u64
        } else {
            0
        },
    };
    Ok(Report { records, summary })
}

pub fn cmd_verify(cfg: &SweepConfig) -> Result<Report> {
    let checks = catalog(CatalogConfig {
        weight_cap: cfg.weight_cap,
        seed: cfg.seed,
        ..CatalogConfig::default()
    });
    cmd_verify_with(&checks, cfg)
}

pub fn cmd_eval(
    family: SumFamily,
    composition: &str,
    n: u64,
    prime: Option<u64>,
    power: u32,
) -> Result<String> {
    let comp: Composition = composition.parse()?;
    let mode = match prime {
        Some(p) => Mode::Residue { p, k: power },
        None => Mode::Exact,
    };
    Ok(eval(family, &comp, n, mode)?.to_string())
}

pub fn cmd_stuffle(w1: &str, w2: &str) -> Result<String> {
    Ok(stuffle_product(&parse_word(w1)?, &parse_word(w2)?).to_string())
}

fn verify_config(args: &VerifyArgs) -> Result<SweepConfig> {
    let (prime_lo, prime_hi) = parse_prime_range(&args.primes)?;
    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    Ok(SweepConfig {
        prime_lo,
        prime_hi,
        suites: args.suites.clone(),
        power_override: args.power,
        jobs,
        seed: args.seed,
        weight_cap: args.weight_cap,
        timing: !args.no_timing,
        out: args.out.clone(),
    })
}

fn run_verify(
    args: &VerifyArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> io::Result<i32> {
    let report = match verify_config(args).and_then(|cfg| cmd_verify(&cfg).map(|r| (cfg, r))) {
        Ok(v) => v,
        Err(e) => {
            writeln!(stderr, "error: {e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let (cfg, report) = report;
    match &cfg.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            report.write_jsonl(&mut w)?;
            w.flush()?;
        }
        None => report.write_jsonl(stdout)?,
    }
    for r in report.records.iter().filter(|r| r.status == Status::Fail) {
        match &r.detail {
            Some(d) => writeln!(stderr, "FAIL {} p={}: {d}", r.id, r.p)?,
            None => writeln!(stderr, "FAIL {} p={}", r.id, r.p)?,
        }
    }
    let s = report.summary;
    writeln!(
        stderr,
        "{} checks: {} pass, {} fail, {} skipped",
        s.total, s.pass, s.fail, s.skipped
    )?;
    Ok(report.exit_code())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Verify(args) => run_verify(&args, stdout, stderr),
        Command::Eval(a) => {
            let result = a
                .family
                .parse()
                .and_then(|fam| cmd_eval(fam, &a.composition, a.n, a.prime, a.power));
            print_or_usage(result, stdout, stderr)
        }
        Command::Stuffle { w1, w2 } => print_or_usage(cmd_stuffle(&w1, &w2), stdout, stderr),
        Command::List {
            suites,
            weight_cap,
            seed,
        } => {
            let cfg = SweepConfig {
                suites,
                ..SweepConfig::default()
            };
            let ids = catalog(CatalogConfig {
                weight_cap,
                seed,
                ..CatalogConfig::default()
            });
            (|| {
                for c in ids.iter().filter(|c| cfg.selects(&c.id)) {
                    writeln!(stdout, "{}", c.id)?;
                }
                Ok(EXIT_OK)
            })()
        }
    };
    outcome.unwrap_or_else(|e| {
        let _ = writeln!(stderr, "error: {e}");
        EXIT_USAGE
    })
}

fn print_or_usage(
    result: Result<String>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> io::Result<i32> {
    match result {
        Ok(text) => {
            writeln!(stdout, "{text}")?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(stderr, "error: {e}")?;
            Ok(EXIT_USAGE)
        }
    }
}
