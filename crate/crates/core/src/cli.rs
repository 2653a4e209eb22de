//! Command-line front end.
//!
//! Exit codes: 0 success, 1 not found within the limit (or a failed
//! `--seed-check`), 2 invalid arguments or domain errors, 3 resource limits.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bounds::{self, Scale};
use crate::counting::{hw_upper_bound, AvoiderCounter, BaseRContext};
use crate::digits::{contains, DigitString};
use crate::experiments::{self, Outcome};
use crate::primes::{is_prime, rosser_lower, SieveConfig, SIEVE_CEILING};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Csv,
    Markdown,
}

#[derive(Debug, Parser)]
#[command(name = "stringprime", version, about = "Digit strings in the primes")]
struct Args {
    #[command(subcommand)]
    command: Option<Command>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,

    /// Worker threads for sieving (defaults to available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory for cached sieve segments
    #[arg(long, global = true, env = "STRINGPRIME_CACHE")]
    cache_dir: Option<PathBuf>,

    /// Significant digits for real numbers
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=17))]
    precision: u32,

    /// Run the invariant self-check before any command
    #[arg(long, global = true)]
    seed_check: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Explicit bounds for strings of length l
    Bound {
        #[arg(long)]
        l: u32,
    },
    /// Solve y / ln y = b for y > e
    SolveLogn {
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
    },
    /// Coupon-collector prediction for the coverage threshold
    Coupon {
        #[arg(long)]
        l: u32,
    },
    /// Exact count of n <= x avoiding a digit string
    CountAvoiders {
        #[arg(long)]
        pattern: DigitString,
        #[arg(long)]
        x: u128,
    },
    /// Least prime containing a digit string
    LeastPrime {
        #[arg(long)]
        pattern: DigitString,
        #[arg(long)]
        limit: u64,
    },
    /// Least prime bound at which every length-l string has appeared
    Coverage {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        limit: u64,
        /// Also write the first containing prime of every string as CSV
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Arithmetic progression of primes that all contain a digit string
    Ap {
        #[arg(long)]
        pattern: DigitString,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        limit: u64,
    },
    /// Share of primes up to 10^e containing a digit string
    Density {
        #[arg(long)]
        pattern: DigitString,
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<u32>,
    },
    /// Coverage threshold M and bound log N for l = 1..=max-l
    Table1 {
        #[arg(long)]
        max_l: u32,
        #[arg(long, default_value_t = SIEVE_CEILING)]
        limit: u64,
    },
}

/// Column-oriented output rendered in one of the three formats.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let mut out = String::new();
        match format {
            OutputFormat::Csv => {
                for line in std::iter::once(&self.headers).chain(&self.rows) {
                    out.push_str(&line.join(","));
                    out.push('\n');
                }
            }
            OutputFormat::Markdown => {
                let line = |cells: &[String]| format!("| {} |\n", cells.join(" | "));
                out.push_str(&line(&self.headers));
                out.push_str(&line(&vec!["---".to_string(); self.headers.len()]));
                for row in &self.rows {
                    out.push_str(&line(row));
                }
            }
            OutputFormat::Human => {
                let widths: Vec<usize> = (0..self.headers.len())
                    .map(|c| {
                        std::iter::once(&self.headers)
                            .chain(&self.rows)
                            .map(|r| r[c].chars().count())
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                for line in std::iter::once(&self.headers).chain(&self.rows) {
                    let cells: Vec<String> = line
                        .iter()
                        .zip(&widths)
                        .map(|(cell, &w)| format!("{cell:>w$}"))
                        .collect();
                    out.push_str(cells.join("  ").trim_end());
                    out.push('\n');
                }
            }
        }
        out
    }
}

/// `%g`-style rendering with `precision` significant digits: trailing zeros
/// dropped, scientific notation (`1.51e7`) outside `1e-4 <= |x| < 10^precision`.
pub fn format_real(x: f64, precision: u32) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let p = precision.max(1) as usize;
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let trim = |s: &str| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if exp < -4 || exp >= p as i32 {
        format!("{}e{}", trim(mantissa), exp)
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x))
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit { .. } => EXIT_RESOURCE,
        _ => EXIT_INVALID,
    }
}

struct Ctx {
    format: OutputFormat,
    precision: u32,
    sieve: SieveConfig,
}

impl Ctx {
    fn real(&self, x: f64) -> String {
        format_real(x, self.precision)
    }
}

/// Parses `argv` (program name first) and runs the command. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };

    let threads = args.threads.unwrap_or_else(|| {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    });
    let mut sieve = match SieveConfig::new().with_threads(threads) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    if let Some(dir) = &args.cache_dir {
        sieve = sieve.with_cache_dir(dir);
    }
    let ctx = Ctx {
        format: args.format,
        precision: args.precision,
        sieve,
    };

    let mut code = EXIT_OK;
    if args.seed_check {
        let results = seed_check(&ctx.sieve);
        let mut table = Table::new(&["check", "result"]);
        for (name, ok) in &results {
            table.push(vec![name.to_string(), if *ok { "pass" } else { "FAIL" }.into()]);
        }
        let _ = write!(out, "{}", table.render(ctx.format));
        if results.iter().any(|(_, ok)| !ok) {
            code = EXIT_NOT_FOUND;
        }
    }

    let Some(command) = args.command else {
        if !args.seed_check {
            let _ = writeln!(err, "error: no command given; see --help");
            return EXIT_INVALID;
        }
        return code;
    };

    match execute(command, &ctx, out, err) {
        Ok(c) => code.max(c),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn not_found(err: &mut dyn Write, limit: u64) -> i32 {
    let _ = writeln!(err, "not found ≤ {limit}");
    EXIT_NOT_FOUND
}

fn execute(
    command: Command,
    ctx: &Ctx,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> crate::Result<i32> {
    let mut emit = |table: Table| {
        let _ = write!(out, "{}", table.render(ctx.format));
    };
    match command {
        Command::Bound { l } => {
            let report = bounds::bound_report(l)?;
            let mut table = Table::new(&[
                "l", "r", "scale", "bound_simple", "bound_exact", "log_n", "coupon_pi", "coupon_n",
            ]);
            let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| ctx.real(x));
            table.push(vec![
                l.to_string(),
                report.r.map_or_else(|| format!("10^{l}"), |r| r.to_string()),
                match report.scale {
                    Scale::Linear => "linear".into(),
                    Scale::Log => "ln".into(),
                },
                ctx.real(report.bound_simple),
                ctx.real(report.bound_exact),
                ctx.real(report.log_n),
                opt(report.coupon_pi),
                opt(report.coupon_n),
            ]);
            emit(table);
        }
        Command::SolveLogn { b } => {
            let y = bounds::solve_log_n(b)?;
            let mut table = Table::new(&["b", "log_n"]);
            table.push(vec![ctx.real(b), ctx.real(y)]);
            emit(table);
        }
        Command::Coupon { l } => {
            let c = bounds::coupon_prediction(l)?;
            let a = bounds::asymptotic_prediction(l)?;
            let mut table = Table::new(&["l", "expected_pi", "predicted_n", "implied_constant"]);
            table.push(vec![
                l.to_string(),
                ctx.real(c.expected_pi),
                ctx.real(c.predicted_n),
                ctx.real(a.implied_constant),
            ]);
            emit(table);
        }
        Command::CountAvoiders { pattern, x } => {
            let count = AvoiderCounter::new(&pattern).count(x)?;
            let mut table = Table::new(&["pattern", "x", "avoiders"]);
            table.push(vec![pattern.to_string(), x.to_string(), count.to_string()]);
            emit(table);
        }
        Command::LeastPrime { pattern, limit } => {
            match experiments::least_prime_containing(&pattern, limit, &ctx.sieve)? {
                Outcome::Found(p) => {
                    let mut table = Table::new(&["pattern", "prime"]);
                    table.push(vec![pattern.to_string(), p.to_string()]);
                    emit(table);
                }
                Outcome::NotFound { limit } => return Ok(not_found(err, limit)),
            }
        }
        Command::Coverage { l, limit, map } => {
            match experiments::coverage_threshold(l, limit, &ctx.sieve)? {
                Outcome::Found(cov) => {
                    if let Some(path) = map {
                        write_coverage_map(&cov, &path)
                            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
                    }
                    let mut table = Table::new(&["l", "universe_size", "m", "last_string"]);
                    table.push(vec![
                        l.to_string(),
                        cov.universe_size.to_string(),
                        cov.m.to_string(),
                        cov.last_string.to_string(),
                    ]);
                    emit(table);
                }
                Outcome::NotFound { limit } => return Ok(not_found(err, limit)),
            }
        }
        Command::Ap { pattern, k, limit } => {
            match experiments::find_prime_ap(&pattern, k, limit, &ctx.sieve)? {
                Outcome::Found(ap) => {
                    let mut table = Table::new(&["pattern", "k", "first_term", "difference", "terms"]);
                    let terms: Vec<String> = ap.terms.iter().map(|t| t.to_string()).collect();
                    table.push(vec![
                        pattern.to_string(),
                        k.to_string(),
                        ap.first_term.to_string(),
                        ap.difference.to_string(),
                        terms.join(" "),
                    ]);
                    emit(table);
                }
                Outcome::NotFound { limit } => return Ok(not_found(err, limit)),
            }
        }
        Command::Density { pattern, exponents } => {
            if let Some(&e) = exponents.iter().find(|&&e| e > 9) {
                return Err(Error::ResourceLimit {
                    limit: 10u128.pow(e.min(38)),
                    ceiling: SIEVE_CEILING,
                });
            }
            let rows = experiments::density_table(&pattern, &exponents, &ctx.sieve)?;
            let mut table =
                Table::new(&["pattern", "n", "pi_n", "containing", "avoiding", "density"]);
            for r in rows {
                table.push(vec![
                    r.pattern.to_string(),
                    r.n.to_string(),
                    r.pi_n.to_string(),
                    r.containing.to_string(),
                    r.avoiding.to_string(),
                    ctx.real(r.density),
                ]);
            }
            emit(table);
        }
        Command::Table1 { max_l, limit } => {
            let rows = experiments::table1(max_l, limit, &ctx.sieve)?;
            let mut table = Table::new(&["l", "M", "logN"]);
            let mut missing = None;
            for row in rows {
                let m = match row.m {
                    Outcome::Found(m) => m.to_string(),
                    Outcome::NotFound { limit } => {
                        missing = Some(limit);
                        "not found".into()
                    }
                };
                table.push(vec![row.l.to_string(), m, ctx.real(row.log_n)]);
            }
            emit(table);
            if let Some(limit) = missing {
                return Ok(not_found(err, limit));
            }
        }
    }
    Ok(EXIT_OK)
}

fn write_coverage_map(
    cov: &experiments::CoverageResult,
    path: &std::path::Path,
) -> std::io::Result<()> {
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    let mut buf = Vec::new();
    cov.write_csv(&mut buf)?;
    fs::write(&tmp, buf)?;
    fs::rename(&tmp, path)
}

/// Quick desk-scale run of the library's invariants. Each entry is a check
/// name and whether it held.
pub fn seed_check(config: &SieveConfig) -> Vec<(&'static str, bool)> {
    const CORPUS: [&str; 7] = ["9", "0", "1", "12", "00", "123", "999"];
    let corpus: Vec<DigitString> = CORPUS.iter().map(|s| s.parse().unwrap()).collect();
    let primes: Vec<u64> = match config.stream(1_000_000) {
        Ok(s) => s.collect(),
        Err(_) => return vec![("sieve available", false)],
    };
    let mut results = Vec::new();

    let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
    results.push((
        "sieve agrees with trial division to 1e4",
        (0..=10_000u64).all(|n| primes.binary_search(&n).is_ok() == trial(n)),
    ));
    results.push((
        "is_prime agrees with sieve to 1e6",
        (0..=1_000_000u64).all(|n| primes.binary_search(&n).is_ok() == is_prime(n)),
    ));

    results.push((
        "exact avoider counts match a scan to 1e4",
        corpus.iter().all(|s| {
            let counter = AvoiderCounter::new(s);
            let mut scan = 0u128;
            (1..=10_000u64).all(|x| {
                scan += !contains(x, s) as u128;
                counter.count(x as u128).map(|c| c.0) == Ok(scan)
            })
        }),
    ));

    let nines = AvoiderCounter::new(&corpus[0]);
    results.push((
        "avoiders of 9 below 10^k equal 9^k - 1",
        (1..=18u32).all(|k| nines.count(10u128.pow(k) - 1).map(|c| c.0) == Ok(9u128.pow(k) - 1)),
    ));

    results.push((
        "base-r majorant bounds exact counts",
        corpus.iter().all(|s| {
            let counter = AvoiderCounter::new(s);
            (2..=7).all(|e| {
                let x = 10u128.pow(e);
                match (counter.count(x), BaseRContext::for_pattern(s, x)) {
                    (Ok(c), Ok(ctx)) => hw_upper_bound(&ctx).is_ok_and(|b| c <= b),
                    _ => false,
                }
            })
        }),
    ));

    let mut pi = 0usize;
    results.push((
        "pi(x) > x / ln x on [17, 1e6]",
        (1..=1_000_000u64).all(|x| {
            while pi < primes.len() && primes[pi] <= x {
                pi += 1;
            }
            x < 17 || rosser_lower(x as f64).is_ok_and(|lo| pi as f64 > lo)
        }),
    ));

    let holds = |l: u32| {
        bounds::theorem_bound_exact(10u128.pow(l))
            .and_then(|e| bounds::theorem_bound_simple(l).map(|s| e <= s))
            .unwrap_or(false)
    };
    results.push((
        "5.7 l^2 10^l dominates the exact bound exactly for l >= 6",
        (6..=15).all(holds) && !holds(5),
    ));

    results.push((
        "y / ln y inversion round trip",
        (0..=120).all(|i| {
            let b = 10f64.powf(1.0 + i as f64 * 11.0 / 120.0);
            bounds::solve_log_n(b).is_ok_and(|y| (y / y.ln() - b).abs() <= 1e-9 * b)
        }),
    ));

    results.push((
        "share of primes containing 9 grows to 1e6",
        experiments::density_table(&corpus[0], &[2, 3, 4, 5, 6], config).is_ok_and(|rows| {
            rows.windows(2).all(|w| w[0].density < w[1].density)
        }),
    ));

    results
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("stringprime").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(330.662_618_908_197, 6), "330.663");
        assert_eq!(format_real(330.662_618_908_197, 4), "330.7");
        assert_eq!(format_real(57.0, 6), "57");
        assert_eq!(format_real(0.32, 6), "0.32");
        assert_eq!(format_real(15_073_973.976, 3), "1.51e7");
        assert_eq!(format_real(277_013_994.8, 6), "2.77014e8");
        assert_eq!(format_real(0.000_012_5, 6), "1.25e-5");
        assert_eq!(format_real(-2.5, 6), "-2.5");
        assert_eq!(format_real(0.0, 6), "0");
        assert_eq!(format_real(999_999.7, 6), "1e6");
        for x in [1.0e-7, 3.3, 123_456_789.0, 6.02e23] {
            let back: f64 = format_real(x, 17).parse().unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn table_formats() {
        let mut t = Table::new(&["l", "M"]);
        t.push(vec!["1".into(), "83".into()]);
        assert_eq!(t.render(OutputFormat::Csv), "l,M\n1,83\n");
        assert_eq!(t.render(OutputFormat::Markdown), "| l | M |\n| --- | --- |\n| 1 | 83 |\n");
        assert_eq!(t.render(OutputFormat::Human), "l   M\n1  83\n");
    }

    #[test]
    fn solve_logn_command() {
        let (code, out, _) = run_str(&["solve-logn", "--b", "57", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out, "b,log_n\n57,330.663\n");
        let (code, _, err) = run_str(&["solve-logn", "--b", "2"]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("domain"));
    }

    #[test]
    fn exit_codes() {
        let (code, _, err) = run_str(&["ap", "--pattern", "123", "--k", "3", "--limit", "100"]);
        assert_eq!(code, EXIT_NOT_FOUND);
        assert_eq!(err.trim(), "not found ≤ 100");
        assert_eq!(run_str(&["count-avoiders", "--pattern", "9a", "--x", "5"]).0, EXIT_INVALID);
        assert_eq!(run_str(&["least-prime", "--pattern", "7", "--limit", "2000000000"]).0, EXIT_RESOURCE);
        assert_eq!(run_str(&["density", "--pattern", "7", "--exponents", "12"]).0, EXIT_RESOURCE);
        assert_eq!(run_str(&["coupon", "--l", "1"]).0, EXIT_INVALID);
        assert_eq!(run_str(&[]).0, EXIT_INVALID);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
        assert_eq!(run_str(&["bogus"]).0, EXIT_INVALID);
        assert_eq!(run_str(&["--threads", "0", "bound", "--l", "1"]).0, EXIT_INVALID);
    }

    #[test]
    fn subcommand_outputs() {
        let csv = |args: &[&str]| {
            let mut v = args.to_vec();
            v.extend(["--format", "csv"]);
            let (code, out, err) = run_str(&v);
            assert_eq!(code, 0, "{err}");
            out
        };
        assert_eq!(csv(&["count-avoiders", "--pattern", "9", "--x", "99"]), "pattern,x,avoiders\n9,99,80\n");
        assert_eq!(csv(&["least-prime", "--pattern", "8", "--limit", "100"]), "pattern,prime\n8,83\n");
        assert_eq!(csv(&["coverage", "--l", "2", "--limit", "10000"]), "l,universe_size,m,last_string\n2,90,1847,84\n");
        assert_eq!(
            csv(&["ap", "--pattern", "9", "--k", "3", "--limit", "1000"]),
            "pattern,k,first_term,difference,terms\n9,3,19,60,19 79 139\n"
        );
        assert_eq!(
            csv(&["density", "--pattern", "1", "--exponents", "2"]),
            "pattern,n,pi_n,containing,avoiding,density\n1,100,25,8,17,0.32\n"
        );
        assert_eq!(
            csv(&["table1", "--max-l", "2"]),
            "l,M,logN\n1,83,330.663\n2,1847,22887.4\n"
        );
        let bound = csv(&["bound", "--l", "6"]);
        assert!(bound.starts_with("l,r,scale,bound_simple,bound_exact,log_n,coupon_pi,coupon_n\n6,1000000,linear,2.052e8,2.04684e8,"));
        assert!(csv(&["bound", "--l", "40"]).contains(",10^40,ln,"));
        assert!(csv(&["coupon", "--l", "2"]).starts_with("l,expected_pi,predicted_n,implied_constant\n2,409.326,3318.52,"));
    }

    #[test]
    fn coverage_map_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("map.csv");
        let p = path.to_str().unwrap();
        let (code, _, _) = run_str(&["coverage", "--l", "1", "--limit", "100", "--map", p]);
        assert_eq!(code, 0);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("string,first_containing_prime\n1,11\n"));
        assert_eq!(text.lines().count(), 10);
    }

    #[test]
    fn seed_check_passes() {
        let results = seed_check(&SieveConfig::default());
        for (name, ok) in &results {
            assert!(ok, "{name}");
        }
        let (code, out, _) = run_str(&["--seed-check", "--format", "csv"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("check,result\n"));
        assert!(!out.contains("FAIL"));
    }
}
