//! `pascal` — evaluate and verify additive identities over the triangle.
//!
//! Exit codes: 0 when everything verifies, 1 when a counterexample was
//! found, 2 on usage, parse, or evaluation errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use pascal_core::dsl::{self, builtins, parse_expr, parse_identity_lines, Evaluator, Identity};
use pascal_core::sums;
use pascal_core::verify::{
    check_identity, check_pascal_recurrence, inductive_proof_check, zero_extended, IdentityReport,
    Region, VerifyError, VerifyOptions,
};
use pascal_core::{TriangleCache, MAX_SUPPORTED_ROW};

/// Rows needed beyond `n_max`: the identities reach up to `C(n+1, k+1)`.
const REGION_ROW_MARGIN: u32 = 2;

#[derive(Parser)]
#[command(
    name = "pascal",
    version,
    about = "Exact evaluation and range verification of additive Pascal-triangle identities",
    after_help = "Built-in identities for `verify` and `prove`:\n  \
        eq1      sum j [ C(n, j) ] == pow2(n)\n  \
        eq2      sum j [ C(n-j, k) ] == C(n+1, k+1)\n  \
        eq3      sum j [ C(n-j, j) ] == fib(n)\n  \
        theorem  sum j [ C(n-2*j, k-j) ] == sum j [ (-1)^j * C(n+1-j, k+1+j) ] + eps(n-2*k)\n\n\
        Any other source argument is read as a file, one identity per line\n\
        (`#` starts a comment). Set PASCAL_CACHE_ROWS to pre-size the row cache."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print row n of the triangle.
    Row {
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Parse and evaluate an expression at the given bindings.
    Eval {
        expr: String,
        #[arg(short = 'n', allow_negative_numbers = true)]
        n: Option<i64>,
        #[arg(short = 'k', allow_negative_numbers = true)]
        k: Option<i64>,
    },
    /// Check identities (a built-in name or a file) over a triangular region.
    Verify {
        source: String,
        #[arg(long = "n-max", default_value_t = 100)]
        n_max: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check the Pascal recurrence with the +1 correction on the line n = 2k.
    Recurrence {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long = "n-max", default_value_t = 100)]
        n_max: u32,
        /// Drop the +1 on the line n = 2k (demonstrates why it is needed).
        #[arg(long)]
        no_line_correction: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Replay the induction argument: base columns plus corrected recurrences.
    Prove {
        source: String,
        #[arg(long = "n-max", default_value_t = 100)]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Time row generation and theorem verification.
    Bench {
        /// Highest row to generate.
        #[arg(long, default_value_t = 1000)]
        rows: u32,
        /// Region bound for theorem verification.
        #[arg(long = "n-max", default_value_t = 300)]
        n_max: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Vertical,
    TheoremRhs,
}

fn main() -> ExitCode {
    reset_sigpipe();
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

// Die quietly like other unix filters when the read end of a pipe closes,
// instead of panicking on a failed println.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    let cache = TriangleCache::new();
    prewarm_from_env(&cache);

    match cli.command {
        Command::Row { n, format } => {
            if n > MAX_SUPPORTED_ROW {
                bail!("row {n} is past the supported maximum of {MAX_SUPPORTED_ROW}");
            }
            let row = cache.row(n);
            let values: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            match format {
                Format::Text => println!("{}", values.join(" ")),
                Format::Csv => println!("{}", values.join(",")),
                Format::Json => println!("{}", serde_json::to_string(&values)?),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { expr, n, k } => {
            let parsed = parse_expr(&expr).map_err(|e| anyhow!("{e}"))?;
            let value = Evaluator::new(&cache)
                .evaluate(&parsed, n, k)
                .map_err(|e| anyhow!("{e}"))?;
            println!("{value}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            source,
            n_max,
            jobs,
            format,
            report,
        } => {
            check_region_bound(n_max)?;
            if jobs == 0 {
                bail!("--jobs must be at least 1");
            }
            let identities = load_identities(&source)?;
            let opts = VerifyOptions::with_jobs(jobs);
            let mut reports = Vec::new();
            for identity in &identities {
                let report = check_identity(&cache, identity, Region::new(n_max), &opts)
                    .map_err(verify_error)?;
                reports.push(report);
            }
            emit_reports(&reports, format, report.as_deref())?;
            Ok(exit_for(&reports))
        }
        Command::Recurrence {
            target,
            n_max,
            no_line_correction,
            jobs,
            format,
            report,
        } => {
            check_region_bound(n_max)?;
            if jobs == 0 {
                bail!("--jobs must be at least 1");
            }
            let correction = if no_line_correction { 0 } else { 1 };
            let region = Region::new(n_max);
            let outcome = match target {
                Target::Vertical => check_pascal_recurrence(
                    zero_extended(|n, k| {
                        sums::vertical_partial_sum(&cache, n, k)
                            .expect("region cells are in-triangle")
                    }),
                    "vertical_partial_sum",
                    region,
                    correction,
                    jobs,
                ),
                Target::TheoremRhs => check_pascal_recurrence(
                    zero_extended(|n, k| {
                        sums::theorem_rhs(&cache, n, k).expect("region cells are in-triangle")
                    }),
                    "theorem_rhs",
                    region,
                    correction,
                    jobs,
                ),
            };
            let reports = vec![outcome.map_err(verify_error)?];
            emit_reports(&reports, format, report.as_deref())?;
            Ok(exit_for(&reports))
        }
        Command::Prove {
            source,
            n_max,
            format,
            report,
        } => {
            check_region_bound(n_max)?;
            let identities = load_identities(&source)?;
            let opts = VerifyOptions::default();
            let mut reports = Vec::new();
            for identity in &identities {
                let outcome =
                    inductive_proof_check(&cache, identity, n_max, &opts).map_err(verify_error)?;
                reports.push(outcome);
            }
            emit_reports(&reports, format, report.as_deref())?;
            Ok(exit_for(&reports))
        }
        Command::Bench { rows, n_max, jobs } => {
            if rows > MAX_SUPPORTED_ROW {
                bail!("--rows {rows} is past the supported maximum of {MAX_SUPPORTED_ROW}");
            }
            check_region_bound(n_max)?;
            bench(rows, n_max, jobs)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn prewarm_from_env(cache: &TriangleCache) {
    let Ok(raw) = std::env::var("PASCAL_CACHE_ROWS") else {
        return;
    };
    match raw.parse::<u32>() {
        Ok(rows) => cache.prewarm(rows.min(MAX_SUPPORTED_ROW)),
        Err(_) => eprintln!("warning: ignoring unparsable PASCAL_CACHE_ROWS={raw:?}"),
    }
}

fn check_region_bound(n_max: u32) -> Result<()> {
    if n_max > MAX_SUPPORTED_ROW - REGION_ROW_MARGIN {
        bail!(
            "--n-max {n_max} is past the supported maximum of {}",
            MAX_SUPPORTED_ROW - REGION_ROW_MARGIN
        );
    }
    Ok(())
}

fn load_identities(source: &str) -> Result<Vec<Identity>> {
    if let Some(text) = builtins::identity_source(source) {
        let identity = dsl::parse_identity(text).expect("built-in identities parse");
        return Ok(vec![identity]);
    }
    let text = std::fs::read_to_string(source)
        .with_context(|| format!("cannot read identity file `{source}`"))?;
    let identities = parse_identity_lines(&text).map_err(|e| anyhow!("{source}: {e}"))?;
    if identities.is_empty() {
        bail!("{source}: no identities found");
    }
    Ok(identities)
}

fn verify_error(err: VerifyError) -> anyhow::Error {
    anyhow!("{err}")
}

fn exit_for(reports: &[IdentityReport]) -> ExitCode {
    if reports.iter().all(|r| r.verified()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn emit_reports(
    reports: &[IdentityReport],
    format: Format,
    path: Option<&std::path::Path>,
) -> Result<()> {
    match format {
        Format::Text => {
            for report in reports {
                println!(
                    "{}  cells={}  elapsed={}ms  {}",
                    report.verdict, report.cells_checked, report.elapsed_ms, report.identity_text
                );
                for cx in report.counterexamples.iter().take(5) {
                    println!(
                        "  counterexample (n={}, k={}): lhs={} rhs={}",
                        cx.n, cx.k, cx.lhs, cx.rhs
                    );
                }
                let extra = report.counterexamples.len().saturating_sub(5);
                if extra > 0 {
                    println!("  ... and {extra} more");
                }
            }
        }
        Format::Csv => {
            for report in reports {
                println!(
                    "{},{},{},{},\"{}\"",
                    report.verdict,
                    report.cells_checked,
                    report.counterexamples.len(),
                    report.elapsed_ms,
                    report.identity_text.replace('"', "\"\"")
                );
            }
        }
        Format::Json => println!("{}", reports_json(reports)?),
    }
    if let Some(path) = path {
        std::fs::write(path, reports_json(reports)?)
            .with_context(|| format!("cannot write report to `{}`", path.display()))?;
    }
    Ok(())
}

fn reports_json(reports: &[IdentityReport]) -> Result<String> {
    let values: Vec<serde_json::Value> = reports.iter().map(|r| r.to_json()).collect();
    Ok(serde_json::to_string_pretty(&values)?)
}

fn bench(rows: u32, n_max: u32, jobs: usize) -> Result<()> {
    let cache = TriangleCache::new();
    let started = Instant::now();
    cache.prewarm(rows);
    let elapsed = started.elapsed();
    let cells = (rows as u64 + 1) * (rows as u64 + 2) / 2;
    println!(
        "row generation:       rows 0..={rows} ({cells} cells) in {:.1} ms — {:.0} cells/s",
        elapsed.as_secs_f64() * 1e3,
        cells as f64 / elapsed.as_secs_f64()
    );

    let identity = dsl::parse_identity(builtins::THEOREM).expect("built-in theorem parses");
    let opts = VerifyOptions::with_jobs(jobs);
    let started = Instant::now();
    let report =
        check_identity(&cache, &identity, Region::new(n_max), &opts).map_err(verify_error)?;
    let elapsed = started.elapsed();
    println!(
        "theorem verification: n_max={n_max} ({} cells, {}) in {:.1} ms — {:.0} cells/s",
        report.cells_checked,
        report.verdict,
        elapsed.as_secs_f64() * 1e3,
        report.cells_checked as f64 / elapsed.as_secs_f64()
    );
    Ok(())
}
