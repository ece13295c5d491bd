//! `jensen`: γ(n) values, Jensen polynomials and hyperbolicity sweeps from
//! the command line.
//!
//! Exit codes: 0 success, 1 counterexample found, 2 indeterminate result or
//! numerical/IO failure, 3 usage or domain error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use jensen_core::sequences::SequenceFileFormat;
use rug::Rational;

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "jensen",
    version,
    about = "Jensen polynomials of the Riemann xi function and of partitions"
)]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 128, value_parser = clap::value_parser!(u32).range(64..))]
    prec: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Directory of the persistent γ cache.
    #[arg(long, global = true, env = "JENSEN_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Do not read or write the γ cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Worker threads for sweeps.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// γ(n), its asymptotic approximation γ̂(n) and their ratio.
    Gamma(GammaArgs),
    /// Coefficients of J^{d,n} or of its renormalization.
    Jensen(JensenArgs),
    /// Certify hyperbolicity over a grid of degrees and shifts.
    Sweep(SweepArgs),
    /// Smallest N(d) with J_p^{d,n} hyperbolic for N(d) ≤ n ≤ max.
    FindN(FindNArgs),
    /// The effective degree-4 inequalities for γ.
    Effective(EffectiveArgs),
    /// Reproduce the reference tables.
    Tables(TablesArgs),
    /// Inspect or clear the γ cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args, Debug)]
struct GammaArgs {
    #[arg(required = true, value_parser = clap::value_parser!(u64).range(1..))]
    n: Vec<u64>,
    /// Only γ(n) from the integral formula.
    #[arg(long, conflicts_with_all = ["asymptotic", "compare"])]
    exact: bool,
    /// Only γ̂(n).
    #[arg(long, conflicts_with = "compare")]
    asymptotic: bool,
    /// γ̂(n), γ(n) and γ(n)/γ̂(n) side by side (the default).
    #[arg(long)]
    compare: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeqName {
    Zeta,
    Partition,
    File,
}

#[derive(Args, Debug, Clone)]
struct SeqOpts {
    /// Sequence file used with `file` (CSV `n,value` or JSON `[[n, value], ...]`).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Format of `--input`; guessed from the extension when omitted.
    #[arg(long)]
    input_format: Option<SequenceFileFormat>,
    /// Pole order m of a weakly holomorphic modular form, e.g. 1/24.
    #[arg(long, requires = "k")]
    m: Option<Rational>,
    /// Weight k of the form, e.g. -1/2.
    #[arg(long, requires = "m", allow_hyphen_values = true)]
    k: Option<Rational>,
    /// Order of the A(n), δ(n) approximation for modular forms.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    order: u8,
}

#[derive(Args, Debug)]
struct JensenArgs {
    #[arg(value_enum)]
    seq: SeqName,
    #[arg(value_parser = clap::value_parser!(u64).range(1..))]
    d: u64,
    n: u64,
    /// Print the renormalized polynomial converging to H_d.
    #[arg(long)]
    renormalized: bool,
    /// Decimals for renormalized coefficients (default 4 for d ≤ 3, else 3).
    #[arg(long)]
    digits: Option<usize>,
    #[command(flatten)]
    seq_opts: SeqOpts,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(value_enum)]
    seq: SeqName,
    /// Degrees, as `a..b` (inclusive) or `a`.
    d_range: commands::Span,
    /// Shifts, as `a..b` (inclusive) or `a`.
    n_range: commands::Span,
    #[command(flatten)]
    seq_opts: SeqOpts,
}

#[derive(Args, Debug)]
struct FindNArgs {
    #[arg(value_parser = clap::value_parser!(u64).range(1..))]
    d: u64,
    /// Last shift scanned.
    #[arg(long = "max")]
    n_max: u64,
    /// First shift scanned.
    #[arg(long = "start", default_value_t = 1)]
    n_start: u64,
    /// Allow d > 8 or max > 5000.
    #[arg(long)]
    long: bool,
}

#[derive(Args, Debug)]
struct EffectiveArgs {
    /// Shifts, as `a..b` (inclusive) or `a`; values below 100 are skipped.
    n_range: commands::Span,
    /// Check this many evenly spaced shifts instead of every one.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    samples: Option<u64>,
}

#[derive(Args, Debug)]
struct TablesArgs {
    /// Also produce the large-n rows and N(d) up to d = 32.
    #[arg(long)]
    long: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum CacheAction {
    /// List cached values.
    Show,
    /// Delete the cache file.
    Clear,
    /// Print the cache file location.
    Path,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(commands::EXIT_USAGE),
            };
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build_global()
        {
            eprintln!("error: cannot start {jobs} worker threads: {e}");
            return ExitCode::from(commands::EXIT_FAILURE);
        }
    }
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}
