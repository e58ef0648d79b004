//! `phi-orbits` command-line front end.
//!
//! Standard output carries data only: in JSON mode one object per line (a
//! `run` header, the result records, a `summary` trailer); in CSV mode a
//! header row plus one row per result. Progress and errors go to standard
//! error. Exit codes: 0 success, 1 verification failure or inconsistency,
//! 2 usage or parameter error.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, Natural};
use crate::diophantine::{
    brute_force_solutions, case_trace, classify, exotic_prime_search, family_members,
    relaxed_search, SearchOptions, SolutionKind,
};
use crate::error::Error;
use crate::orbits::{
    detect_relations, scan_orbits, DetectConfig, DEFAULT_K_MAX, DEFAULT_MIN_SUPPORT, DEFAULT_R_MAX,
};
use crate::sieve::{SearchCheckpoint, DEFAULT_SEGMENT_SIZE};

/// Environment variable consulted for the worker count when `--jobs` is absent.
pub const JOBS_ENV: &str = "PHI_ORBITS_JOBS";

#[derive(Parser, Debug)]
#[command(name = "phi-orbits", version, about = "Orbits of g(n) = n + phi(n)")]
struct Cli {
    /// Output format for result records.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Classify,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List solutions of phi(n) + phi(n + phi(n)) = n up to a limit.
    Solutions {
        #[arg(long)]
        limit: u64,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Compare the brute-force oracle with the classifier; exit 1 on mismatch.
    VerifyTheorem {
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Search primes p = 8m + 7 in [from, to) with phi(6m + 5) = 4m + 4.
    SearchExotic {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, default_value_t = DEFAULT_SEGMENT_SIZE)]
        segment_size: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Stop after this many segments (resume later from the checkpoint).
        #[arg(long)]
        stop_after_segments: Option<usize>,
    },
    /// All n <= limit with 3 phi(n) = 2n + 2.
    SearchRelaxed {
        #[arg(long)]
        limit: u64,
        #[arg(long, default_value_t = DEFAULT_SEGMENT_SIZE)]
        segment_size: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Relations g_{k+r}(n) = M g_k(n) along one orbit.
    Orbit {
        #[arg(long)]
        n: Natural,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        kmax: usize,
        #[arg(long, default_value_t = DEFAULT_R_MAX)]
        rmax: usize,
        #[arg(long, default_value_t = DEFAULT_MIN_SUPPORT)]
        min_support: usize,
    },
    /// Relations for every n up to a limit.
    ScanOrbits {
        #[arg(long)]
        limit: Natural,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        kmax: usize,
        #[arg(long, default_value_t = DEFAULT_R_MAX)]
        rmax: usize,
        #[arg(long, default_value_t = DEFAULT_MIN_SUPPORT)]
        min_support: usize,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Members 2^l * q of the known solution families.
    Families {
        #[arg(long, default_value_t = 10)]
        max_exponent: u32,
    },
    /// Case-analysis witnesses for a solution n.
    Trace {
        #[arg(long)]
        n: Natural,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub n: u64,
    /// Found by the brute-force oracle (absent with `--method classify`).
    pub in_oracle: Option<bool>,
    /// Classifier verdict (absent with `--method brute`).
    pub kind: Option<SolutionKind>,
    pub ell: u32,
    pub exotic_m: Option<Natural>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub limit: u64,
    pub oracle_solutions: usize,
    pub classified_solutions: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExoticRecord {
    pub m: u64,
    pub p: u64,
    pub q: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelaxedRecord {
    pub n: u64,
    pub factorization: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub kind: SolutionKind,
    pub ell: u32,
    pub n: Natural,
}

/// Command name, parameters and summary of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub results: usize,
    pub status: String,
    pub truncations: Vec<String>,
    pub elapsed_ms: u64,
}

struct Failure {
    code: i32,
    kind: &'static str,
    reason: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Inconsistency(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            kind: e.kind(),
            reason: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 2,
            kind: "io",
            reason: e.to_string(),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: 2,
            kind: "io",
            reason: e.to_string(),
        }
    }
}

/// Streams records to standard output in the selected format.
struct Emitter<'w> {
    format: Format,
    out: &'w mut dyn Write,
    count: usize,
}

impl<'w> Emitter<'w> {
    fn new(format: Format, out: &'w mut dyn Write) -> Self {
        Emitter {
            format,
            out,
            count: 0,
        }
    }

    fn header(&mut self, report: &RunReport) -> Result<(), Failure> {
        if self.format == Format::Json {
            #[derive(Serialize)]
            struct Header<'a> {
                record: &'static str,
                command: &'a str,
                parameters: &'a BTreeMap<String, String>,
            }
            let line = serde_json::to_string(&Header {
                record: "run",
                command: &report.command,
                parameters: &report.parameters,
            })
            .map_err(io::Error::other)?;
            writeln!(self.out, "{line}")?;
        }
        Ok(())
    }

    fn record<T: Serialize>(&mut self, tag: &str, value: &T) -> Result<(), Failure> {
        self.count += 1;
        match self.format {
            Format::Json => {
                // Written as text rather than via serde_json::Value, which
                // cannot hold integers above u64.
                let body = serde_json::to_string(value).map_err(io::Error::other)?;
                let tag = serde_json::to_string(tag).map_err(io::Error::other)?;
                match body.strip_prefix('{') {
                    Some("}") => writeln!(self.out, "{{\"record\":{tag}}}")?,
                    Some(rest) => writeln!(self.out, "{{\"record\":{tag},{rest}")?,
                    None => writeln!(self.out, "{{\"record\":{tag},\"value\":{body}}}")?,
                }
            }
            Format::Csv => {
                // Header row only before the first record.
                let mut writer = csv::WriterBuilder::new()
                    .has_headers(self.count == 1)
                    .from_writer(Vec::new());
                writer.serialize(value)?;
                let bytes = writer
                    .into_inner()
                    .map_err(|e| io::Error::other(e.to_string()))?;
                self.out.write_all(&bytes)?;
            }
        }
        Ok(())
    }

    fn summary(&mut self, report: &RunReport, err: &mut dyn Write) -> Result<(), Failure> {
        #[derive(Serialize)]
        struct Summary<'a> {
            record: &'static str,
            command: &'a str,
            results: usize,
            status: &'a str,
            truncations: &'a [String],
            elapsed_ms: u64,
        }
        let line = serde_json::to_string(&Summary {
            record: "summary",
            command: &report.command,
            results: report.results,
            status: &report.status,
            truncations: &report.truncations,
            elapsed_ms: report.elapsed_ms,
        })
        .map_err(io::Error::other)?;
        match self.format {
            Format::Json => writeln!(self.out, "{line}")?,
            Format::Csv => writeln!(err, "{line}")?,
        }
        self.out.flush()?;
        Ok(())
    }
}

/// Rate-limited progress lines on standard error.
struct Progress<'e> {
    err: &'e mut dyn Write,
    last: Instant,
}

impl<'e> Progress<'e> {
    fn new(err: &'e mut dyn Write) -> Self {
        Progress {
            err,
            last: Instant::now(),
        }
    }

    fn tick(&mut self, cp: &SearchCheckpoint) {
        if self.last.elapsed() >= Duration::from_secs(2) {
            self.last = Instant::now();
            let _ = writeln!(
                self.err,
                "progress search={} completed={} hits={}",
                cp.search_id,
                cp.last_completed_hi,
                cp.hits.len()
            );
        }
    }
}

fn resolve_jobs(jobs: Option<usize>) -> Result<usize, Failure> {
    let jobs = match jobs {
        Some(j) => j,
        None => match std::env::var(JOBS_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| Failure {
                code: 2,
                kind: "invalid-argument",
                reason: format!("{JOBS_ENV}={v:?} is not a positive integer"),
            })?,
            Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if jobs == 0 {
        return Err(Failure {
            code: 2,
            kind: "invalid-argument",
            reason: "job count must be positive".into(),
        });
    }
    Ok(jobs)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure {
            code: 2,
            kind: "invalid-argument",
            reason: format!("thread pool: {e}"),
        })
}

fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Runs the CLI on `argv` (including the program name) and returns the exit
/// code.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let reason = e.to_string();
            let reason = reason.lines().next().unwrap_or("usage error");
            report_failure(
                err,
                &Failure {
                    code: 2,
                    kind: "usage",
                    reason: reason.trim_start_matches("error: ").to_string(),
                },
            );
            return 2;
        }
    };
    let started = Instant::now();
    let mut emitter = Emitter::new(cli.format, out);
    match execute(cli.command, &mut emitter, err, started) {
        Ok(code) => code,
        Err(failure) => {
            report_failure(err, &failure);
            failure.code
        }
    }
}

/// Entry point for the binary.
pub fn run_main() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut err = io::stderr();
    run(&argv, &mut out, &mut err)
}

fn report_failure(err: &mut dyn Write, failure: &Failure) {
    #[derive(Serialize)]
    struct ErrorLine<'a> {
        record: &'static str,
        exit_code: i32,
        kind: &'a str,
        reason: &'a str,
    }
    let line = serde_json::to_string(&ErrorLine {
        record: "error",
        exit_code: failure.code,
        kind: failure.kind,
        reason: &failure.reason,
    })
    .unwrap_or_default();
    let _ = writeln!(err, "{line}");
}

fn finish(
    emitter: &mut Emitter<'_>,
    err: &mut dyn Write,
    mut report: RunReport,
    started: Instant,
    ok: bool,
) -> Result<i32, Failure> {
    report.results = emitter.count;
    report.status = if ok { "ok" } else { "mismatch" }.into();
    report.elapsed_ms = started.elapsed().as_millis() as u64;
    emitter.summary(&report, err)?;
    Ok(if ok { 0 } else { 1 })
}

fn execute(
    command: Command,
    emitter: &mut Emitter<'_>,
    err: &mut dyn Write,
    started: Instant,
) -> Result<i32, Failure> {
    match command {
        Command::Solutions {
            limit,
            method,
            jobs,
        } => {
            let report = RunReport {
                command: "solutions".into(),
                parameters: params([
                    ("limit", limit.to_string()),
                    ("method", format!("{method:?}").to_lowercase()),
                ]),
                ..RunReport::default()
            };
            emitter.header(&report)?;
            let jobs = resolve_jobs(jobs)?;
            let oracle = if method != Method::Classify {
                Some(brute_force_solutions(limit)?)
            } else {
                None
            };
            let classified = if method != Method::Brute {
                Some(pool(jobs)?.install(|| classified_solutions(limit))?)
            } else {
                None
            };
            let mut ns: Vec<u64> = oracle
                .iter()
                .chain(classified.iter().map(|c| &c.0))
                .flatten()
                .copied()
                .collect();
            ns.sort_unstable();
            ns.dedup();
            let mut ok = true;
            for n in ns {
                let in_oracle = oracle.as_ref().map(|o| o.binary_search(&n).is_ok());
                let (kind, ell, exotic_m) = match classified.as_ref() {
                    Some((list, classes)) => match list.binary_search(&n) {
                        Ok(i) => (Some(classes[i].kind), classes[i].ell, classes[i].exotic_m),
                        Err(_) => (Some(SolutionKind::NotSolution), n.trailing_zeros(), None),
                    },
                    None => (None, n.trailing_zeros(), None),
                };
                if in_oracle == Some(false) || kind == Some(SolutionKind::NotSolution) {
                    ok = false;
                }
                emitter.record(
                    "solution",
                    &SolutionRecord {
                        n,
                        in_oracle,
                        kind,
                        ell,
                        exotic_m,
                    },
                )?;
            }
            finish(emitter, err, report, started, ok)
        }
        Command::VerifyTheorem { limit, jobs } => {
            let report = RunReport {
                command: "verify-theorem".into(),
                parameters: params([("limit", limit.to_string())]),
                ..RunReport::default()
            };
            emitter.header(&report)?;
            let jobs = resolve_jobs(jobs)?;
            let oracle = brute_force_solutions(limit)?;
            let (classified, _) = pool(jobs)?.install(|| classified_solutions(limit))?;
            let mismatches = symmetric_difference(&oracle, &classified);
            for n in mismatches.iter().take(20) {
                let _ = writeln!(
                    err,
                    "mismatch n={n} oracle={} classifier={}",
                    oracle.binary_search(n).is_ok(),
                    classified.binary_search(n).is_ok()
                );
            }
            let ok = mismatches.is_empty();
            emitter.record(
                "theorem_check",
                &TheoremCheck {
                    limit,
                    oracle_solutions: oracle.len(),
                    classified_solutions: classified.len(),
                    mismatches: mismatches.len(),
                    first_mismatch: mismatches.first().copied(),
                },
            )?;
            finish(emitter, err, report, started, ok)
        }
        Command::SearchExotic {
            from,
            to,
            segment_size,
            jobs,
            checkpoint,
            stop_after_segments,
        } => {
            let mut report = RunReport {
                command: "search-exotic".into(),
                parameters: params([
                    ("from", from.to_string()),
                    ("to", to.to_string()),
                    ("segment_size", segment_size.to_string()),
                ]),
                ..RunReport::default()
            };
            emitter.header(&report)?;
            let options = SearchOptions {
                segment_size,
                jobs: resolve_jobs(jobs)?,
                checkpoint: checkpoint.as_deref(),
                stop_after: stop_after_segments,
            };
            let outcome = {
                let mut progress = Progress::new(err);
                exotic_prime_search(from, to, &options, |cp| progress.tick(cp))?
            };
            for w in &outcome.witnesses {
                emitter.record(
                    "exotic",
                    &ExoticRecord {
                        m: w.m,
                        p: w.p,
                        q: w.q,
                    },
                )?;
            }
            if !outcome.run.finished {
                report.truncations.push(format!(
                    "stopped early: searched p < {} of [{from}, {to})",
                    outcome.run.completed_hi
                ));
            }
            finish(emitter, err, report, started, true)
        }
        Command::SearchRelaxed {
            limit,
            segment_size,
            jobs,
            checkpoint,
        } => {
            let report = RunReport {
                command: "search-relaxed".into(),
                parameters: params([
                    ("limit", limit.to_string()),
                    ("segment_size", segment_size.to_string()),
                ]),
                ..RunReport::default()
            };
            emitter.header(&report)?;
            let options = SearchOptions {
                segment_size,
                jobs: resolve_jobs(jobs)?,
                checkpoint: checkpoint.as_deref(),
                stop_after: None,
            };
            let outcome = {
                let mut progress = Progress::new(err);
                relaxed_search(limit, &options, |cp| progress.tick(cp))?
            };
            for &n in &outcome.solutions {
                emitter.record(
                    "relaxed",
                    &RelaxedRecord {
                        n,
                        factorization: factorize(n as Natural).to_string(),
                    },
                )?;
            }
            finish(emitter, err, report, started, true)
        }
        Command::Orbit {
            n,
            kmax,
            rmax,
            min_support,
        } => {
            let mut report = RunReport {
                command: "orbit".into(),
                parameters: params([
                    ("n", n.to_string()),
                    ("kmax", kmax.to_string()),
                    ("rmax", rmax.to_string()),
                    ("min_support", min_support.to_string()),
                ]),
                ..RunReport::default()
            };
            emitter.header(&report)?;
            if n == 0 {
                return Err(Error::Precondition("n must be positive".into()).into());
            }
            let config = DetectConfig {
                k_max: kmax,
                r_max: rmax,
                min_support,
            };
            let orbit = crate::arith::iterate_g(n, kmax);
            if orbit.truncated {
                report.truncations.push(format!(
                    "orbit of {n} overflows after k = {}",
                    orbit.last_k()
                ));
            }
            for rel in detect_relations(n, &config)? {
                emitter.record("relation", &rel)?;
            }
            finish(emitter, err, report, started, true)
        }
        Command::ScanOrbits {
            limit,
            kmax,
            rmax,
            min_support,
            jobs,
        } => {
            let report = RunReport {
                command: "scan-orbits".into(),
                parameters: params([
                    ("limit", limit.to_string()),
                    ("kmax", kmax.to_string()),
                    ("rmax", rmax.to_string()),
                    ("min_support", min_support.to_string()),
                ]),
                ..RunReport::default()
            };
            emitter.header(&report)?;
            let config = DetectConfig {
                k_max: kmax,
                r_max: rmax,
                min_support,
            };
            let relations = pool(resolve_jobs(jobs)?)?.install(|| scan_orbits(limit, &config))?;
            for rel in &relations {
                emitter.record("relation", rel)?;
            }
            finish(emitter, err, report, started, true)
        }
        Command::Families { max_exponent } => {
            let report = RunReport {
                command: "families".into(),
                parameters: params([("max_exponent", max_exponent.to_string())]),
                ..RunReport::default()
            };
            emitter.header(&report)?;
            for kind in SolutionKind::NAMED {
                let members = family_members(kind, max_exponent, None)?;
                for (ell, n) in (kind.min_ell()..).zip(members) {
                    emitter.record("family", &FamilyRecord { kind, ell, n })?;
                }
            }
            finish(emitter, err, report, started, true)
        }
        Command::Trace { n } => {
            let report = RunReport {
                command: "trace".into(),
                parameters: params([("n", n.to_string())]),
                ..RunReport::default()
            };
            emitter.header(&report)?;
            let trace = case_trace(n)?;
            emitter.record("trace", &trace)?;
            finish(emitter, err, report, started, true)
        }
    }
}

/// n ≤ limit the classifier accepts, with their classes, ascending.
fn classified_solutions(
    limit: u64,
) -> Result<(Vec<u64>, Vec<crate::diophantine::SolutionClass>), Error> {
    let classes: Vec<(u64, crate::diophantine::SolutionClass)> = (1..=limit)
        .into_par_iter()
        .map(|n| classify(n as Natural).map(|c| (n, c)))
        .filter(|r| !matches!(r, Ok((_, c)) if c.kind == SolutionKind::NotSolution))
        .collect::<Result<_, _>>()?;
    Ok(classes.into_iter().unzip())
}

fn symmetric_difference(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(*x);
                i += 1;
            }
            (Some(_), Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (Some(x), None) => {
                out.push(*x);
                i += 1;
            }
            (None, Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_of_sorted_lists() {
        assert_eq!(symmetric_difference(&[1, 3, 5], &[3, 4]), vec![1, 4, 5]);
        assert!(symmetric_difference(&[], &[]).is_empty());
    }
}
