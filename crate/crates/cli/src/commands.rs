use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use jensen_core::asymptotics::{gamma_hat, AsymParams};
use jensen_core::jensen::search::{EPS4, H4, SIGNS4};
use jensen_core::jensen::{
    effective_check_d4, find_n, jensen_poly, jensen_poly_exact, renormalize, sweep, InstanceResult,
    Method, Verdict,
};
use jensen_core::sequences::{load_sequence, GammaCache, SequenceFileFormat, SequenceProvider};
use jensen_core::{BigReal, Error};
use rug::Float;

use crate::output::{emit, Cell, Format, Table};
use crate::{
    CacheAction, Cli, Command, EffectiveArgs, FindNArgs, GammaArgs, JensenArgs, SeqName, SeqOpts,
    SweepArgs, TablesArgs,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_COUNTEREXAMPLE: u8 = 1;
pub const EXIT_FAILURE: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

/// Limits beyond which `find-n` asks for `--long`.
const FIND_N_MAX_D: u64 = 8;
const FIND_N_MAX_N: u64 = 5000;

/// Displayed digits are truncated rather than rounded.
const VALUE_DIGITS: usize = 11;
const RATIO_DECIMALS: usize = 9;
const TABLE_SHIFTS: [u64; 4] = [100, 200, 300, 400];

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain { .. }
            | Error::OutOfDomain { .. }
            | Error::SequenceFormat { .. }
            | Error::ZeroPolynomial => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        // a closed pipe (`jensen ... | head`) is not a failure
        if e.kind() == io::ErrorKind::BrokenPipe {
            return CliError {
                code: EXIT_OK,
                message: String::new(),
            };
        }
        CliError {
            code: EXIT_FAILURE,
            message: format!("cannot write output: {e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// An inclusive range of non-negative integers written `a..b`, `a..=b` or
/// `a`. `a > b` is the empty range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub lo: u64,
    pub hi: u64,
}

impl Span {
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad bound `{t}`: {e}"))
        };
        match s.split_once("..") {
            Some((a, b)) => Ok(Span {
                lo: parse(a)?,
                hi: parse(b.strip_prefix('=').unwrap_or(b))?,
            }),
            None => {
                let v = parse(s)?;
                Ok(Span { lo: v, hi: v })
            }
        }
    }
}

struct Ctx {
    prec: u32,
    format: Format,
    cache_dir: Option<PathBuf>,
}

impl Ctx {
    fn zeta(&self) -> CliResult<SequenceProvider> {
        Ok(SequenceProvider::zeta_gamma(self.cache_dir.as_deref())?)
    }

    fn sequence(&self, name: SeqName, opts: &SeqOpts) -> CliResult<SequenceProvider> {
        let modular = match (&opts.m, &opts.k) {
            (Some(m), Some(k)) => Some(AsymParams::modular(m.clone(), k.clone(), opts.order)?),
            _ => None,
        };
        if name != SeqName::File && (opts.input.is_some() || modular.is_some()) {
            return Err(CliError::usage(
                "--input, --m and --k only apply to the `file` sequence",
            ));
        }
        Ok(match name {
            SeqName::Zeta => self.zeta()?,
            SeqName::Partition => SequenceProvider::partition(),
            SeqName::File => {
                let path = opts
                    .input
                    .as_deref()
                    .ok_or_else(|| CliError::usage("the `file` sequence needs --input <path>"))?;
                let format = opts
                    .input_format
                    .or_else(|| SequenceFileFormat::from_path(path))
                    .ok_or_else(|| {
                        CliError::usage("cannot tell the file format; pass --input-format csv|json")
                    })?;
                let seq = load_sequence(path, format)?;
                match modular {
                    Some(params) => seq.with_params(params),
                    None => seq,
                }
            }
        })
    }

    fn emit(&self, tables: &[Table]) -> CliResult<()> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        emit(&mut out, self.format, tables)?;
        out.flush()?;
        Ok(())
    }
}

fn default_cache_dir() -> Option<PathBuf> {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache")))?;
    Some(base.join("jensen"))
}

pub fn run(cli: Cli) -> CliResult<u8> {
    let cache_dir = if cli.no_cache {
        None
    } else {
        cli.cache_dir.clone().or_else(default_cache_dir)
    };
    let ctx = Ctx {
        prec: cli.prec,
        format: cli.format,
        cache_dir,
    };
    match cli.command {
        Command::Gamma(args) => gamma(&ctx, &args),
        Command::Jensen(args) => jensen(&ctx, &args),
        Command::Sweep(args) => sweep_cmd(&ctx, &args),
        Command::FindN(args) => find_n_cmd(&ctx, &args),
        Command::Effective(args) => effective(&ctx, &args),
        Command::Tables(args) => tables(&ctx, &args),
        Command::Cache { action } => cache(&ctx, action),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum GammaMode {
    Exact,
    Asymptotic,
    Compare,
}

fn gamma_table(ctx: &Ctx, seq: &SequenceProvider, ns: &[u64], mode: GammaMode) -> CliResult<Table> {
    let mut table = match mode {
        GammaMode::Exact => Table::new("gamma", &["n", "gamma", "prec_bits", "method"]),
        GammaMode::Asymptotic => Table::new("gamma", &["n", "gamma_hat", "prec_bits", "method"]),
        GammaMode::Compare => Table::new(
            "gamma",
            &["n", "gamma_hat", "gamma", "ratio", "prec_bits", "method"],
        ),
    };
    for &n in ns {
        let exact = match mode {
            GammaMode::Asymptotic => None,
            _ => Some(seq.value_at(n, ctx.prec)?),
        };
        let approx = match mode {
            GammaMode::Exact => None,
            GammaMode::Asymptotic => Some(gamma_hat(n, ctx.prec)?.value),
            // γ̂ needs n ≥ 2; n = 1 keeps its γ column
            GammaMode::Compare => (n >= 2)
                .then(|| gamma_hat(n, ctx.prec))
                .transpose()?
                .map(|g| g.value),
        };
        let sci =
            |v: &Option<BigReal>| Cell::from(v.as_ref().map(|v| v.to_sci_truncated(VALUE_DIGITS)));
        let row = match mode {
            GammaMode::Exact => vec![
                n.into(),
                sci(&exact),
                ctx.prec.into(),
                "exact_integral".into(),
            ],
            GammaMode::Asymptotic => {
                vec![n.into(), sci(&approx), ctx.prec.into(), "asymptotic".into()]
            }
            GammaMode::Compare => {
                let ratio = match (&exact, &approx) {
                    (Some(g), Some(h)) => Some(
                        BigReal::new(Float::with_val(ctx.prec, g.as_float() / h.as_float()))
                            .to_fixed_truncated(RATIO_DECIMALS),
                    ),
                    _ => None,
                };
                let method = if approx.is_some() {
                    "exact_integral/asymptotic"
                } else {
                    "exact_integral"
                };
                vec![
                    n.into(),
                    sci(&approx),
                    sci(&exact),
                    ratio.into(),
                    ctx.prec.into(),
                    method.into(),
                ]
            }
        };
        table.push(row);
    }
    seq.flush()?;
    Ok(table)
}

fn gamma(ctx: &Ctx, args: &GammaArgs) -> CliResult<u8> {
    let mode = if args.exact {
        GammaMode::Exact
    } else if args.asymptotic {
        GammaMode::Asymptotic
    } else {
        GammaMode::Compare
    };
    let seq = ctx.zeta()?;
    let table = gamma_table(ctx, &seq, &args.n, mode)?;
    ctx.emit(&[table])?;
    Ok(EXIT_OK)
}

/// Descending-power rendering of ascending coefficients, in the style
/// `0.9896X^2+0.3083X-2.0199`.
fn render_poly(coeffs: &[String]) -> String {
    let mut out = String::new();
    let top = coeffs.len() - 1;
    for (i, c) in coeffs.iter().enumerate().rev() {
        match c.strip_prefix('-') {
            Some(rest) => {
                out.push('-');
                out.push_str(rest);
            }
            None => {
                if i != top {
                    out.push('+');
                }
                out.push_str(c);
            }
        }
        match i {
            0 => {}
            1 => out.push('X'),
            _ => out.push_str(&format!("X^{i}")),
        }
    }
    out
}

fn renormalized_decimals(d: usize) -> usize {
    if d <= 3 {
        4
    } else {
        3
    }
}

struct Rendered {
    coeffs: Vec<String>,
    prec_bits: Option<u32>,
    method: &'static str,
}

fn jensen_coeffs(
    ctx: &Ctx,
    seq: &SequenceProvider,
    d: usize,
    n: u64,
    renormalized: bool,
    digits: Option<usize>,
) -> CliResult<Rendered> {
    if renormalized {
        let poly = renormalize(seq, d, n, ctx.prec)?;
        let decimals = digits.unwrap_or_else(|| renormalized_decimals(d));
        let mut coeffs: Vec<String> = poly
            .coeffs()
            .iter()
            .map(|c| c.to_fixed_truncated(decimals))
            .collect();
        coeffs.resize(d + 1, BigReal::zero(64).to_fixed(decimals));
        return Ok(Rendered {
            coeffs,
            prec_bits: Some(ctx.prec),
            method: "renormalized",
        });
    }
    if seq.has_exact() {
        let poly = jensen_poly_exact(seq, d, n)?;
        return Ok(Rendered {
            coeffs: poly.coeffs().iter().map(|c| c.to_string()).collect(),
            prec_bits: None,
            method: "exact",
        });
    }
    let poly = jensen_poly(seq, d, n, ctx.prec)?;
    let digits = digits.unwrap_or(VALUE_DIGITS);
    Ok(Rendered {
        coeffs: poly
            .coeffs()
            .iter()
            .map(|c| c.to_sci_truncated(digits))
            .collect(),
        prec_bits: Some(ctx.prec),
        method: "numeric",
    })
}

fn jensen(ctx: &Ctx, args: &JensenArgs) -> CliResult<u8> {
    let seq = ctx.sequence(args.seq, &args.seq_opts)?;
    let d = args.d as usize;
    let r = jensen_coeffs(ctx, &seq, d, args.n, args.renormalized, args.digits)?;
    seq.flush()?;
    let label = seq.label().to_string();
    let table = if ctx.format == Format::Table {
        let mut t = Table::new(
            "jensen",
            &["seq", "d", "n", "polynomial", "prec_bits", "method"],
        );
        t.push(vec![
            label.into(),
            d.into(),
            args.n.into(),
            render_poly(&r.coeffs).into(),
            r.prec_bits.into(),
            r.method.into(),
        ]);
        t
    } else {
        let mut t = Table::new(
            "jensen",
            &["seq", "d", "n", "k", "coefficient", "prec_bits", "method"],
        );
        for (k, c) in r.coeffs.iter().enumerate() {
            t.push(vec![
                label.as_str().into(),
                d.into(),
                args.n.into(),
                k.into(),
                c.as_str().into(),
                r.prec_bits.into(),
                r.method.into(),
            ]);
        }
        t
    };
    ctx.emit(&[table])?;
    Ok(EXIT_OK)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Hyperbolic => "hyperbolic",
        Verdict::NotHyperbolic => "not_hyperbolic",
        Verdict::Indeterminate => "indeterminate",
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::HermiteHankelExact => "hermite_hankel_exact",
        Method::HermiteHankelInterval => "hermite_hankel_interval",
        Method::Sturm => "sturm",
    }
}

/// `20..24, 31` style list of shifts.
fn compress(ns: &[u64]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < ns.len() {
        let mut j = i;
        while j + 1 < ns.len() && ns[j + 1] == ns[j] + 1 {
            j += 1;
        }
        parts.push(if i == j {
            ns[i].to_string()
        } else {
            format!("{}..{}", ns[i], ns[j])
        });
        i = j + 1;
    }
    parts.join(", ")
}

fn sweep_tables(results: &[InstanceResult], format: Format) -> Table {
    if format != Format::Table {
        let mut t = Table::new(
            "sweep",
            &["d", "n", "verdict", "method", "prec_bits", "margin"],
        );
        for r in results {
            t.push(vec![
                r.d.into(),
                r.n.into(),
                verdict_name(r.certificate.verdict).into(),
                method_name(r.certificate.method).into(),
                r.prec_bits.into(),
                r.certificate.margin.to_sci(6).into(),
            ]);
        }
        return t;
    }
    let mut t = Table::new(
        "sweep",
        &[
            "d",
            "shifts",
            "hyperbolic",
            "not_hyperbolic",
            "indeterminate",
            "max_prec_bits",
        ],
    );
    let mut i = 0;
    while i < results.len() {
        let d = results[i].d;
        let group: Vec<&InstanceResult> = results[i..].iter().take_while(|r| r.d == d).collect();
        i += group.len();
        let pick = |v: Verdict| -> Vec<u64> {
            group
                .iter()
                .filter(|r| r.certificate.verdict == v)
                .map(|r| r.n)
                .collect()
        };
        let hyperbolic = pick(Verdict::Hyperbolic).len();
        let bad = pick(Verdict::NotHyperbolic);
        let unknown = pick(Verdict::Indeterminate);
        let max_prec = group.iter().filter_map(|r| r.prec_bits).max();
        let list = |ns: &[u64]| {
            if ns.is_empty() {
                "0".to_string()
            } else {
                format!("{} ({})", ns.len(), compress(ns))
            }
        };
        t.push(vec![
            d.into(),
            format!("{}..{}", group[0].n, group[group.len() - 1].n).into(),
            hyperbolic.into(),
            list(&bad).into(),
            list(&unknown).into(),
            max_prec.into(),
        ]);
    }
    t
}

fn sweep_cmd(ctx: &Ctx, args: &SweepArgs) -> CliResult<u8> {
    if !args.d_range.is_empty() && args.d_range.lo == 0 {
        return Err(CliError::usage("degrees start at 1"));
    }
    let seq = ctx.sequence(args.seq, &args.seq_opts)?;
    let results = if args.d_range.is_empty() || args.n_range.is_empty() {
        Vec::new()
    } else {
        sweep(
            &seq,
            args.d_range.lo as usize..=args.d_range.hi as usize,
            args.n_range.lo..=args.n_range.hi,
            ctx.prec,
        )?
    };
    seq.flush()?;
    ctx.emit(&[sweep_tables(&results, ctx.format)])?;
    let has = |v: Verdict| results.iter().any(|r| r.certificate.verdict == v);
    Ok(if has(Verdict::NotHyperbolic) {
        EXIT_COUNTEREXAMPLE
    } else if has(Verdict::Indeterminate) {
        EXIT_FAILURE
    } else {
        EXIT_OK
    })
}

fn find_n_rows(
    ctx: &Ctx,
    degrees: impl Iterator<Item = u64>,
    n_start: u64,
    n_max: u64,
) -> CliResult<Table> {
    let seq = SequenceProvider::partition();
    let mut t = Table::new(
        "N(d)",
        &[
            "d", "n_start", "n_max", "N", "witness", "failures", "method",
        ],
    );
    for d in degrees {
        let report = find_n(&seq, d as usize, n_start, n_max, ctx.prec)?;
        t.push(vec![
            d.into(),
            n_start.into(),
            n_max.into(),
            report.threshold.into(),
            report.last_failure.into(),
            report.failures.into(),
            method_name(Method::HermiteHankelExact).into(),
        ]);
    }
    Ok(t)
}

fn find_n_cmd(ctx: &Ctx, args: &FindNArgs) -> CliResult<u8> {
    if !args.long && (args.d > FIND_N_MAX_D || args.n_max > FIND_N_MAX_N) {
        return Err(CliError::usage(format!(
            "d > {FIND_N_MAX_D} or --max > {FIND_N_MAX_N} is a long run; pass --long to proceed"
        )));
    }
    if args.n_start > args.n_max {
        return Err(CliError::usage(format!(
            "--start {} exceeds --max {}",
            args.n_start, args.n_max
        )));
    }
    let t = find_n_rows(ctx, std::iter::once(args.d), args.n_start, args.n_max)?;
    ctx.emit(&[t])?;
    Ok(EXIT_OK)
}

/// Room left in the box: `ε₄(k) − s_k(β_k − h_k)`.
fn slack(k: usize, beta: f64) -> f64 {
    EPS4[k] - f64::from(SIGNS4[k]) * (beta - H4[k])
}

/// `count` evenly spaced integers from `lo` to `hi`, endpoints included.
fn spaced(lo: u64, hi: u64, count: u64) -> Vec<u64> {
    if count <= 1 || lo == hi {
        return vec![lo];
    }
    let mut out: Vec<u64> = (0..count)
        .map(|i| lo + ((hi - lo) as u128 * i as u128 / (count - 1) as u128) as u64)
        .collect();
    out.dedup();
    out
}

fn effective(ctx: &Ctx, args: &EffectiveArgs) -> CliResult<u8> {
    let span = args.n_range;
    let mut ns: Vec<u64> = Vec::new();
    if !span.is_empty() {
        if span.lo < 100 {
            eprintln!("warning: the degree-4 bounds are stated for n ≥ 100; skipping n < 100");
        }
        let lo = span.lo.max(100);
        if lo <= span.hi {
            ns = match args.samples {
                Some(k) => spaced(lo, span.hi, k),
                None => (lo..=span.hi).collect(),
            };
        }
    }
    let seq = ctx.zeta()?;
    let report = effective_check_d4(&seq, &ns, ctx.prec)?;
    seq.flush()?;
    let mut t = Table::new(
        "effective",
        &[
            "n",
            "delta",
            "beta_0",
            "beta_1",
            "beta_2",
            "beta_3",
            "beta_4",
            "slack_0",
            "slack_1",
            "slack_2",
            "slack_3",
            "slack_4",
            "bounds_hold",
            "bounds_in_box",
            "pass",
        ],
    );
    for row in &report.rows {
        let mut cells: Vec<Cell> = vec![row.n.into(), row.delta.to_sci(6).into()];
        cells.extend(row.beta.iter().map(|b| Cell::from(b.to_fixed(6))));
        cells.extend((0..5).map(|k| Cell::from(format!("{:.6}", slack(k, row.beta[k].to_f64())))));
        cells.push(row.bounds_hold.iter().all(|&b| b).into());
        cells.push(row.bounds_in_box.iter().all(|&b| b).into());
        cells.push(row.passes().into());
        t.push(cells);
    }
    ctx.emit(&[t])?;
    if ctx.format == Format::Table {
        let tail_ok = report.first_pass.is_some_and(|first| {
            report
                .rows
                .iter()
                .filter(|r| r.n >= first)
                .all(|r| r.passes())
        });
        match report.first_pass {
            Some(first) => println!("first passing n: {first}; all later rows pass: {tail_ok}"),
            None if report.rows.is_empty() => {}
            None => println!("no row passes"),
        }
    }
    Ok(EXIT_OK)
}

fn renormalized_table(ctx: &Ctx, seq: &SequenceProvider, d: usize, name: &str) -> CliResult<Table> {
    let mut t = Table::new(
        format!("{name} d={d}"),
        &["n", "polynomial", "prec_bits", "method"],
    );
    for n in TABLE_SHIFTS {
        let r = jensen_coeffs(ctx, seq, d, n, true, None)?;
        t.push(vec![
            n.into(),
            render_poly(&r.coeffs).into(),
            r.prec_bits.into(),
            r.method.into(),
        ]);
    }
    Ok(t)
}

fn tables(ctx: &Ctx, args: &TablesArgs) -> CliResult<u8> {
    let zeta = ctx.zeta()?;
    let partition = SequenceProvider::partition();
    let gamma_ns: &[u64] = if args.long {
        &[10, 100, 1000, 10000]
    } else {
        &[10, 100, 1000]
    };
    let (max_d, n_max) = if args.long { (32, 50_000) } else { (5, 2000) };
    let out = vec![
        gamma_table(ctx, &zeta, gamma_ns, GammaMode::Compare)?,
        find_n_rows(ctx, 1..=max_d, 1, n_max)?,
        renormalized_table(ctx, &partition, 2, "partition")?,
        renormalized_table(ctx, &partition, 3, "partition")?,
        renormalized_table(ctx, &zeta, 2, "zeta")?,
        renormalized_table(ctx, &zeta, 3, "zeta")?,
        renormalized_table(ctx, &zeta, 6, "zeta")?,
    ];
    zeta.flush()?;
    ctx.emit(&out)?;
    Ok(EXIT_OK)
}

fn cache(ctx: &Ctx, action: CacheAction) -> CliResult<u8> {
    let dir = ctx.cache_dir.as_deref().ok_or_else(|| {
        CliError::usage("no cache directory (set --cache-dir or JENSEN_CACHE_DIR)")
    })?;
    match action {
        CacheAction::Path => {
            println!(
                "{}",
                dir.join(jensen_core::sequences::CACHE_FILE_NAME).display()
            );
        }
        CacheAction::Clear => {
            let cache = GammaCache::open(dir)?;
            let count = cache.len();
            cache.clear()?;
            println!("removed {count} records from {}", cache.path().display());
        }
        CacheAction::Show => {
            let cache = GammaCache::open(dir)?;
            let mut t = Table::new("cache", &["n", "prec_bits", "source", "value"]);
            for r in cache.records() {
                t.push(vec![
                    r.n.into(),
                    r.prec_bits.into(),
                    r.source.tag().into(),
                    r.to_value().to_sci(VALUE_DIGITS).into(),
                ]);
            }
            ctx.emit(&[t])?;
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        assert_eq!("7..2000".parse::<Span>().unwrap(), Span { lo: 7, hi: 2000 });
        assert_eq!("3..=5".parse::<Span>().unwrap(), Span { lo: 3, hi: 5 });
        assert_eq!("2".parse::<Span>().unwrap(), Span { lo: 2, hi: 2 });
        assert!("5..3".parse::<Span>().unwrap().is_empty());
        assert!("x..3".parse::<Span>().is_err());
    }

    #[test]
    fn polynomial_rendering() {
        let c: Vec<String> = ["-2.0199", "0.3083", "0.9896"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(render_poly(&c), "0.9896X^2+0.3083X-2.0199");
        assert_eq!(render_poly(&["1".into(), "1".into()]), "1X+1");
    }

    #[test]
    fn compressed_lists() {
        assert_eq!(compress(&[20, 21, 22, 24, 30, 31]), "20..22, 24, 30..31");
        assert_eq!(compress(&[]), "");
    }

    #[test]
    fn spacing_includes_endpoints() {
        let s = spaced(104, 10_000, 50);
        assert_eq!(s.len(), 50);
        assert_eq!((s[0], s[49]), (104, 10_000));
        assert_eq!(spaced(100, 102, 10), vec![100, 101, 102]);
    }
}
