//! `ipb`: tables, values, verification suites, the divisibility scan, and
//! the zeta series, with JSON-lines or CSV output.
//!
//! Exit codes: 0 on success, 1 when a verification subcommand finds a
//! mismatch, 2 for usage and domain errors. Errors go to stderr as a single
//! JSON object with an `error` code field, whatever the output format.

use std::fmt::Display;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use serde::Serialize;

use ipb::analytic::{decimal_digits_for_bits, format_decimal, parse_bigfloat, BigComplex};
use ipb::bernoulli::{
    divisibility_scan, incomplete_poly_bernoulli_values, Family, ScanEntry,
};
use ipb::series::{gf_incomplete_bernoulli, gf_iterated_integral};
use ipb::stirling::{partition_count_oracle_with_cap, table, DEFAULT_ENUM_CAP};
use ipb::{analytic, BigInt, BigRational, Variant};

#[derive(Parser)]
#[command(name = "ipb", version, about = "Incomplete poly-Bernoulli toolkit")]
struct Cli {
    /// Output format for records on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Classical,
    Restricted,
    Associated,
}

#[derive(Subcommand)]
enum Command {
    /// Stirling value S(n,k) or the whole row n.
    Stirling(StirlingArgs),
    /// Exact incomplete poly-Bernoulli values B_0 .. B_{n_max}.
    Bernoulli(BernoulliArgs),
    /// Verification suites.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Residues of B_p^{(mu)} mod p against the divisibility predictions.
    Divisibility(DivisibilityArgs),
    /// Zeta series at a Lambert W point, with an Euler-Maclaurin reference.
    Zeta(ZetaArgs),
}

#[derive(Args)]
struct StirlingArgs {
    #[arg(long, value_enum)]
    variant: VariantArg,
    #[arg(short)]
    n: usize,
    /// Number of blocks; omit for the whole row.
    #[arg(short)]
    k: Option<usize>,
    /// Block size bound; required for restricted/associated.
    #[arg(short)]
    m: Option<usize>,
    /// Re-count by brute-force enumeration and report both values.
    /// `IPB_ENUM_CAP` overrides the n cap (default 16).
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct BernoulliArgs {
    #[arg(long, allow_negative_numbers = true)]
    mu: i64,
    #[arg(long, value_enum)]
    variant: VariantArg,
    #[arg(short)]
    m: Option<usize>,
    #[arg(long)]
    n_max: usize,
    /// Also render each value in fixed-point with this many fractional digits.
    #[arg(long)]
    decimal: Option<usize>,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Defining sum vs. GF extraction vs. iterated integrals, coefficient by
    /// coefficient; exit 0 iff all three agree everywhere.
    Gf(VerifyGfArgs),
}

#[derive(Args)]
struct VerifyGfArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    mu: u32,
    #[arg(long, value_enum)]
    variant: VariantArg,
    #[arg(short)]
    m: Option<usize>,
    #[arg(long)]
    order: usize,
}

#[derive(Args)]
struct DivisibilityArgs {
    /// Comma-separated list of primes.
    #[arg(long, value_delimiter = ',', required = true)]
    primes: Vec<u64>,
    /// Most negative mu to scan; the range is mu_min..=0.
    #[arg(long, allow_negative_numbers = true)]
    mu_min: i64,
    #[arg(long)]
    m_min: usize,
    #[arg(long)]
    m_max: usize,
}

#[derive(Args)]
struct ZetaArgs {
    /// Evaluation point as `re` or `re,im`; requires Re(s) > 1.
    #[arg(long)]
    s: String,
    /// Lambert W branch, 0 or -1.
    #[arg(long, allow_negative_numbers = true)]
    branch: i64,
    /// Number of series terms past the constant one.
    #[arg(long)]
    terms: usize,
    /// Working precision in bits.
    #[arg(long, default_value_t = 128)]
    precision: usize,
}

enum CliError {
    Usage(String),
    Lib(ipb::Error),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Lib(e) => e.code(),
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
        }
    }
}

impl From<ipb::Error> for CliError {
    fn from(e: ipb::Error) -> Self {
        CliError::Lib(e)
    }
}

fn usage<T>(message: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(message.into()))
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: String,
}

/// Writes one line to stdout, treating a closed pipe as a normal end of
/// output rather than a panic.
fn print_line(line: &str) {
    let mut out = io::stdout().lock();
    if let Err(e) = writeln!(out, "{line}") {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("failed writing to stdout: {e}");
    }
}

fn emit_error(code: &str, message: String) {
    let record = ErrorRecord { error: code, message };
    eprintln!("{}", serde_json::to_string(&record).expect("serializable"));
}

trait OutputRecord: Serialize {
    const HEADER: &'static str;
    fn csv_row(&self) -> String;
}

struct Emitter {
    format: Format,
    header_done: bool,
}

impl Emitter {
    fn new(format: Format) -> Self {
        Emitter {
            format,
            header_done: false,
        }
    }

    fn emit<R: OutputRecord>(&mut self, record: &R) {
        match self.format {
            Format::Json => {
                print_line(&serde_json::to_string(record).expect("serializable"));
            }
            Format::Csv => {
                if !self.header_done {
                    print_line(R::HEADER);
                    self.header_done = true;
                }
                print_line(&record.csv_row());
            }
        }
    }
}

fn opt_field<T: Display>(o: &Option<T>) -> String {
    o.as_ref().map(|v| v.to_string()).unwrap_or_default()
}

#[derive(Serialize)]
struct StirlingRecord {
    kind: &'static str,
    variant: &'static str,
    n: usize,
    k: usize,
    m: Option<usize>,
    value: String,
    oracle: Option<String>,
    agree: Option<bool>,
}

impl OutputRecord for StirlingRecord {
    const HEADER: &'static str = "kind,variant,n,k,m,value,oracle,agree";

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.kind,
            self.variant,
            self.n,
            self.k,
            opt_field(&self.m),
            self.value,
            opt_field(&self.oracle),
            opt_field(&self.agree),
        )
    }
}

#[derive(Serialize)]
struct BernoulliRecord {
    kind: &'static str,
    variant: &'static str,
    n: usize,
    mu: i64,
    m: Option<usize>,
    value: String,
    decimal: Option<String>,
}

impl OutputRecord for BernoulliRecord {
    const HEADER: &'static str = "kind,variant,n,mu,m,value,decimal";

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.kind,
            self.variant,
            self.n,
            self.mu,
            opt_field(&self.m),
            self.value,
            opt_field(&self.decimal),
        )
    }
}

#[derive(Serialize)]
struct GfCheckRecord {
    kind: &'static str,
    variant: &'static str,
    mu: u32,
    m: Option<usize>,
    order: usize,
    n: usize,
    defining: String,
    gf: String,
    integral: String,
    agree: bool,
}

impl OutputRecord for GfCheckRecord {
    const HEADER: &'static str = "kind,variant,mu,m,order,n,defining,gf,integral,agree";

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.kind,
            self.variant,
            self.mu,
            opt_field(&self.m),
            self.order,
            self.n,
            self.defining,
            self.gf,
            self.integral,
            self.agree,
        )
    }
}

#[derive(Serialize)]
struct ResidueRecord {
    kind: &'static str,
    family: &'static str,
    p: u64,
    mu: i64,
    m: usize,
    residue: u64,
    predicted: u64,
    within_range: bool,
    pass: bool,
}

impl OutputRecord for ResidueRecord {
    const HEADER: &'static str = "kind,family,p,mu,m,residue,predicted,within_range,pass";

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.kind,
            self.family,
            self.p,
            self.mu,
            self.m,
            self.residue,
            self.predicted,
            self.within_range,
            self.pass,
        )
    }
}

impl ResidueRecord {
    fn from_entry(e: &ScanEntry) -> Self {
        ResidueRecord {
            kind: "residue",
            family: match e.family {
                Family::Restricted => "restricted",
                Family::Associated => "associated",
            },
            p: e.p,
            mu: e.mu,
            m: e.m,
            residue: e.residue,
            predicted: e.predicted,
            within_range: e.within_theorem_range,
            pass: e.pass,
        }
    }
}

#[derive(Serialize)]
struct ZetaRecord {
    kind: &'static str,
    s_re: String,
    s_im: String,
    branch: i64,
    terms: usize,
    precision: usize,
    final_re: String,
    final_im: String,
    est_error: String,
    reference_re: String,
    reference_im: String,
    abs_diff: String,
}

impl OutputRecord for ZetaRecord {
    const HEADER: &'static str = "kind,s_re,s_im,branch,terms,precision,final_re,final_im,\
                                  est_error,reference_re,reference_im,abs_diff";

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.kind,
            self.s_re,
            self.s_im,
            self.branch,
            self.terms,
            self.precision,
            self.final_re,
            self.final_im,
            self.est_error,
            self.reference_re,
            self.reference_im,
            self.abs_diff,
        )
    }
}

/// Resolves the (variant flag, -m) pair, rejecting the combinations the
/// library would panic on.
fn resolve_variant(
    arg: VariantArg,
    m: Option<usize>,
) -> Result<(Variant, &'static str, Option<usize>), CliError> {
    match (arg, m) {
        (VariantArg::Classical, None) => Ok((Variant::Classical, "classical", None)),
        (VariantArg::Classical, Some(_)) => usage("variant `classical` does not take -m"),
        (VariantArg::Restricted, Some(m)) if m >= 1 => {
            Ok((Variant::Restricted(m), "restricted", Some(m)))
        }
        (VariantArg::Associated, Some(m)) if m >= 1 => {
            Ok((Variant::Associated(m), "associated", Some(m)))
        }
        (_, Some(_)) => usage("-m must be at least 1"),
        (_, None) => usage("variant `restricted`/`associated` requires -m"),
    }
}

/// Fixed-point rendering of an exact rational with `digits` fractional
/// digits, rounding half away from zero.
fn rational_to_decimal(v: &BigRational, digits: usize) -> String {
    let negative = v.is_negative();
    let abs_num = v.numer().abs();
    let den = v.denom();
    let mut int_part = &abs_num / den;
    let rem = &abs_num % den;
    let scaled = rem * BigInt::from(10).pow(digits as u32 + 1) / den;
    let mut frac: BigInt = (scaled + 5) / 10;
    let cap = BigInt::from(10).pow(digits as u32);
    if frac >= cap {
        int_part += 1;
        frac -= cap;
    }
    let sign = if negative && !(int_part.is_zero() && frac.is_zero()) {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac:0>digits$}")
    }
}

fn enum_cap_from_env() -> Result<usize, CliError> {
    match std::env::var("IPB_ENUM_CAP") {
        Ok(v) => v
            .parse()
            .map_err(|_| CliError::Usage(format!("IPB_ENUM_CAP must be an integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_ENUM_CAP),
    }
}

fn run_stirling(args: StirlingArgs, out: &mut Emitter) -> Result<u8, CliError> {
    let (variant, name, m) = resolve_variant(args.variant, args.m)?;
    let tab = table(variant, args.n);
    let ks: Vec<usize> = match args.k {
        Some(k) => vec![k],
        None => (0..=args.n).collect(),
    };
    let cap = enum_cap_from_env()?;
    let (min_size, max_size) = variant.block_size_bounds();
    let mut all_agree = true;
    for k in ks {
        let value = tab.value(args.n, k);
        let (oracle, agree) = if args.oracle {
            let count = partition_count_oracle_with_cap(args.n, k, min_size, max_size, cap)?;
            let ok = count == *value;
            all_agree &= ok;
            (Some(count.to_string()), Some(ok))
        } else {
            (None, None)
        };
        out.emit(&StirlingRecord {
            kind: "stirling",
            variant: name,
            n: args.n,
            k,
            m,
            value: value.to_string(),
            oracle,
            agree,
        });
    }
    Ok(if all_agree { 0 } else { 1 })
}

fn run_bernoulli(args: BernoulliArgs, out: &mut Emitter) -> Result<u8, CliError> {
    let (variant, name, m) = resolve_variant(args.variant, args.m)?;
    for value in incomplete_poly_bernoulli_values(args.n_max, args.mu, variant) {
        out.emit(&BernoulliRecord {
            kind: "bernoulli",
            variant: name,
            n: value.n,
            mu: value.mu,
            m,
            value: value.value.to_string(),
            decimal: args.decimal.map(|d| rational_to_decimal(&value.value, d)),
        });
    }
    Ok(0)
}

fn run_verify_gf(args: VerifyGfArgs, out: &mut Emitter) -> Result<u8, CliError> {
    let (variant, name, m) = resolve_variant(args.variant, args.m)?;
    let gf = gf_incomplete_bernoulli(args.mu, variant, args.order);
    let integral = gf_iterated_integral(args.mu, variant, args.order);
    let mut all_agree = true;
    for n in 0..=args.order {
        let defining =
            ipb::bernoulli::incomplete_poly_bernoulli(n, args.mu as i64, variant);
        let agree = gf[n] == defining && integral[n] == defining;
        all_agree &= agree;
        out.emit(&GfCheckRecord {
            kind: "gf-check",
            variant: name,
            mu: args.mu,
            m,
            order: args.order,
            n,
            defining: defining.to_string(),
            gf: gf[n].to_string(),
            integral: integral[n].to_string(),
            agree,
        });
    }
    Ok(if all_agree { 0 } else { 1 })
}

fn run_divisibility(args: DivisibilityArgs, out: &mut Emitter) -> Result<u8, CliError> {
    if args.mu_min > 0 {
        return usage("--mu-min must be <= 0");
    }
    if args.m_min < 1 || args.m_min > args.m_max {
        return usage("need 1 <= m_min <= m_max");
    }
    let report = divisibility_scan(
        &args.primes,
        args.mu_min..=0,
        args.m_min..=args.m_max,
        &[Family::Restricted, Family::Associated],
    )?;
    for entry in &report.entries {
        out.emit(&ResidueRecord::from_entry(entry));
    }
    Ok(if report.all_within_range_pass() { 0 } else { 1 })
}

fn run_zeta(args: ZetaArgs, out: &mut Emitter) -> Result<u8, CliError> {
    if args.precision < 64 {
        return usage("--precision must be at least 64 bits");
    }
    let s = parse_complex(&args.s, args.precision)
        .ok_or_else(|| CliError::Usage(format!("cannot parse --s value `{}`", args.s)))?;
    let run = analytic::zeta_series(&s, args.branch, args.terms, args.precision)?;
    let reference = analytic::zeta_reference(&s, 1e-12)?;
    let diff = run.final_value().sub(&reference).abs();
    let digits = decimal_digits_for_bits(args.precision);
    let dec = |x: &ipb::astro_float::BigFloat| format_decimal(x, digits);
    out.emit(&ZetaRecord {
        kind: "zeta-run",
        s_re: dec(&s.re),
        s_im: dec(&s.im),
        branch: args.branch,
        terms: args.terms,
        precision: args.precision,
        final_re: dec(&run.final_value().re),
        final_im: dec(&run.final_value().im),
        est_error: dec(&run.est_error),
        reference_re: dec(&reference.re),
        reference_im: dec(&reference.im),
        abs_diff: dec(&diff),
    });
    Ok(0)
}

fn parse_complex(text: &str, precision: usize) -> Option<BigComplex> {
    let (re, im) = match text.split_once(',') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (text.trim(), None),
    };
    let re = parse_bigfloat(re, precision)?;
    let im = match im {
        Some(part) => parse_bigfloat(part, precision)?,
        None => parse_bigfloat("0", precision)?,
    };
    Some(BigComplex::new(re, im))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let mut out = Emitter::new(cli.format);
    match cli.command {
        Command::Stirling(args) => run_stirling(args, &mut out),
        Command::Bernoulli(args) => run_bernoulli(args, &mut out),
        Command::Verify(VerifyCommand::Gf(args)) => run_verify_gf(args, &mut out),
        Command::Divisibility(args) => run_divisibility(args, &mut out),
        Command::Zeta(args) => run_zeta(args, &mut out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            emit_error("usage", e.to_string());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            emit_error(e.code(), e.message());
            ExitCode::from(2)
        }
    }
}
