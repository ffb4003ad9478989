//! The `powsum` command line.
//!
//! [`run`] parses an argument vector and returns the exit code together with
//! everything destined for stdout and stderr, so the binary is a thin wrapper
//! and tests can drive the CLI in-process.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bernoulli::{bernoulli_table, retrieve_bernoulli, BernoulliError, BernoulliOracle};
use crate::compositions::{enumerate_compositions, enumerate_compositions_length, MAX_ENUMERATION};
use crate::dirichlet::{enumerate_characters, AlkanReport, DirichletCharacter, Parity, ALKAN_MAX_R};
use crate::exact::rational::format_rational;
use crate::exact::Rational;
use crate::power_sums::{h_naive, PowerSumError, PowerSums};
use crate::report::{any_failed, emit_report, OutputMode, ReportGroup};
use crate::verify::{self, FloatTolerance};

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "POWSUM_THREADS";

pub const MAX_POWERSUM_P: u32 = 100;
pub const MAX_POWERSUM_K: u64 = 100_000;
pub const MAX_ORACLE_N: usize = 500;
pub const MAX_RETRIEVE_N: usize = 60;
pub const MAX_CHARACTERS_K: u64 = 200;
pub const MAX_EXACT_PMAX: u32 = 16;
pub const MAX_EXACT_KMAX: u64 = 60;
pub const MAX_FLOAT_PMAX: u32 = 16;
pub const MAX_FLOAT_KMAX: u64 = 1000;
pub const MAX_EQ3_PMAX: u32 = 12;
pub const MAX_EQ3_KMAX: u64 = 40;
pub const MAX_COEFFS_PMAX: u32 = 16;
pub const MAX_ALKAN_K: u64 = 60;

/// Absolute acceptance scale for the floating sweep, multiplied by `k^(p+1)`.
const FLOAT_ABSOLUTE_SCALE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "powsum", version, about = "Exact power sums, Bernoulli numbers and exponential sum identities")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate h(p, k) = 1^p + ... + k^p, or print its closed form.
    Powersum(PowersumArgs),
    /// Bernoulli numbers from the defining recurrence or by retrieval.
    Bernoulli(BernoulliArgs),
    /// List the compositions of n, optionally only those with m parts.
    Compositions(CompositionsArgs),
    /// Tabulate the Dirichlet characters mod k.
    Characters(CharactersArgs),
    /// Run a verification sweep.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PowerMethod {
    Naive,
    Recurrence,
    Faulhaber,
    Poly,
}

#[derive(Debug, Args)]
struct PowersumArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long, value_enum)]
    method: PowerMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BernoulliMethod {
    Oracle,
    Retrieve,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["n", "table"]))]
struct BernoulliArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "oracle", conflicts_with = "table")]
    method: BernoulliMethod,
    /// Print B_0..B_NMAX, each retrieved and checked against the recurrence.
    #[arg(long, value_name = "NMAX")]
    table: Option<usize>,
}

#[derive(Debug, Args)]
struct CompositionsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Debug, Args)]
struct CharactersArgs {
    #[arg(long)]
    k: u64,
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// The exponential power sum recurrence.
    Prop1(Prop1Args),
    /// The reflection identity mod x^k - 1.
    Eq3(Eq3Args),
    /// The chain coefficient sums.
    Coeffs(CoeffsArgs),
    /// Magnitude check of the L-function identity.
    Alkan(AlkanArgs),
}

#[derive(Debug, Args)]
struct Prop1Args {
    #[arg(long)]
    pmax: u32,
    #[arg(long)]
    kmax: u64,
    /// Exact arithmetic in Q[x]/Φ_k (default).
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    /// Double precision with a relative tolerance.
    #[arg(long)]
    float: bool,
    #[arg(long, requires = "float", default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Debug, Args)]
struct Eq3Args {
    #[arg(long)]
    pmax: u32,
    #[arg(long)]
    kmax: u64,
}

#[derive(Debug, Args)]
struct CoeffsArgs {
    #[arg(long)]
    pmax: u32,
}

#[derive(Debug, Args)]
struct AlkanArgs {
    #[arg(long)]
    k: u64,
    #[arg(long)]
    r: u32,
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
    /// Also report imprimitive characters (never asserted).
    #[arg(long)]
    include_imprimitive: bool,
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn ok(stdout: String) -> Self {
        CliOutput {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

enum Failure {
    Usage { path: Vec<&'static str>, message: String },
    Internal(String),
}

type CmdResult = Result<CliOutput, Failure>;

fn usage(path: &[&'static str], message: impl Into<String>) -> Failure {
    Failure::Usage {
        path: path.to_vec(),
        message: message.into(),
    }
}

fn limit(path: &[&'static str], flag: &str, value: impl std::fmt::Display, max: impl std::fmt::Display, what: &str) -> Failure {
    usage(
        path,
        format!("{flag} {value} exceeds the limit of {max} for {what}; lower {flag}"),
    )
}

fn render_usage_error(path: &[&'static str], message: &str) -> String {
    let mut root = Cli::command();
    root.build();
    let mut cmd = &mut root;
    for name in path {
        cmd = cmd.find_subcommand_mut(name).expect("known subcommand");
    }
    cmd.error(ErrorKind::ValueValidation, message).render().to_string()
}

/// Parses `args` (program name first) and executes the subcommand.
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliOutput::ok(text),
                _ => CliOutput {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let mode = if cli.json { OutputMode::Json } else { OutputMode::Text };
    let result = match thread_pool() {
        Ok(Some(pool)) => pool.install(|| dispatch(&cli.command, mode)),
        Ok(None) => dispatch(&cli.command, mode),
        Err(message) => Err(usage(&[], message)),
    };
    match result {
        Ok(out) => out,
        Err(Failure::Usage { path, message }) => CliOutput {
            code: 2,
            stdout: String::new(),
            stderr: render_usage_error(&path, &message),
        },
        Err(Failure::Internal(message)) => CliOutput {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        },
    }
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>, String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map(Some)
        .map_err(|e| e.to_string())
}

fn dispatch(cmd: &Command, mode: OutputMode) -> CmdResult {
    match cmd {
        Command::Powersum(a) => powersum(a, mode),
        Command::Bernoulli(a) => bernoulli(a, mode),
        Command::Compositions(a) => compositions(a, mode),
        Command::Characters(a) => characters(a, mode),
        Command::Verify(v) => match v {
            VerifyCommand::Prop1(a) => verify_prop1(a, mode),
            VerifyCommand::Eq3(a) => verify_eq3(a, mode),
            VerifyCommand::Coeffs(a) => verify_coeffs(a, mode),
            VerifyCommand::Alkan(a) => verify_alkan(a, mode),
        },
    }
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn method_name(m: PowerMethod) -> &'static str {
    match m {
        PowerMethod::Naive => "naive",
        PowerMethod::Recurrence => "recurrence",
        PowerMethod::Faulhaber => "faulhaber",
        PowerMethod::Poly => "poly",
    }
}

fn power_error(e: PowerSumError) -> Failure {
    match e {
        PowerSumError::EvenExponent(p) => usage(
            &["powersum"],
            format!("--method recurrence needs an odd --p, got {p}"),
        ),
        other => Failure::Internal(other.to_string()),
    }
}

fn powersum(a: &PowersumArgs, mode: OutputMode) -> CmdResult {
    const PATH: &[&str] = &["powersum"];
    if a.p > MAX_POWERSUM_P {
        return Err(limit(PATH, "--p", a.p, MAX_POWERSUM_P, "power sums"));
    }
    if let Some(k) = a.k {
        if k > MAX_POWERSUM_K {
            return Err(limit(PATH, "--k", k, MAX_POWERSUM_K, "power sums"));
        }
    }
    let method = method_name(a.method);
    let mut sums = PowerSums::new();
    let Some(k) = a.k else {
        if a.method != PowerMethod::Poly {
            return Err(usage(PATH, format!("--k is required with --method {method}")));
        }
        let poly = sums.h_polynomial(a.p).map_err(power_error)?;
        return Ok(CliOutput::ok(match mode {
            OutputMode::Text => format!("{poly}\n"),
            OutputMode::Json => json_line(&json!({ "p": a.p, "method": method, "polynomial": poly })),
        }));
    };
    let value: Rational = match a.method {
        PowerMethod::Naive => Rational::from_integer(h_naive(a.p, k)),
        PowerMethod::Recurrence => Rational::from_integer(sums.h_recurrence(a.p, k).map_err(power_error)?),
        PowerMethod::Faulhaber => sums.h_faulhaber(a.p, k).map_err(power_error)?,
        PowerMethod::Poly => sums
            .h_polynomial(a.p)
            .map_err(power_error)?
            .eval(&Rational::from_integer(k.into())),
    };
    let text = format_rational(&value);
    Ok(CliOutput::ok(match mode {
        OutputMode::Text => format!("{text}\n"),
        OutputMode::Json => json_line(&json!({ "p": a.p, "k": k, "method": method, "value": text })),
    }))
}

fn bernoulli_error(e: BernoulliError) -> Failure {
    match e {
        BernoulliError::OddIndex(n) => usage(
            &["bernoulli"],
            format!("--method retrieve applies to --n 1 and even --n >= 2, got {n}"),
        ),
        other => Failure::Internal(other.to_string()),
    }
}

fn bernoulli(a: &BernoulliArgs, mode: OutputMode) -> CmdResult {
    const PATH: &[&str] = &["bernoulli"];
    if let Some(nmax) = a.table {
        if nmax > MAX_RETRIEVE_N {
            return Err(limit(PATH, "--table", nmax, MAX_RETRIEVE_N, "retrieval"));
        }
        let table = bernoulli_table(nmax).map_err(bernoulli_error)?;
        return Ok(CliOutput::ok(match mode {
            OutputMode::Text => {
                let mut s = String::new();
                for (n, v) in table.iter() {
                    let _ = writeln!(s, "B_{n} = {}", format_rational(v));
                }
                s
            }
            OutputMode::Json => json_line(&table),
        }));
    }
    let n = a.n.expect("clap requires --n or --table");
    let (value, method) = match a.method {
        BernoulliMethod::Oracle => {
            if n > MAX_ORACLE_N {
                return Err(limit(PATH, "--n", n, MAX_ORACLE_N, "the oracle"));
            }
            (BernoulliOracle::new().get(n), "oracle")
        }
        BernoulliMethod::Retrieve => {
            if n > MAX_RETRIEVE_N {
                return Err(limit(PATH, "--n", n, MAX_RETRIEVE_N, "retrieval"));
            }
            (retrieve_bernoulli(n).map_err(bernoulli_error)?, "retrieve")
        }
    };
    let text = format_rational(&value);
    Ok(CliOutput::ok(match mode {
        OutputMode::Text => format!("{text}\n"),
        OutputMode::Json => json_line(&json!({ "n": n, "method": method, "value": text })),
    }))
}

fn compositions(a: &CompositionsArgs, mode: OutputMode) -> CmdResult {
    const PATH: &[&str] = &["compositions"];
    if a.n > MAX_ENUMERATION {
        return Err(limit(PATH, "--n", a.n, MAX_ENUMERATION, "composition enumeration"));
    }
    let list = match a.m {
        Some(m) => enumerate_compositions_length(a.n, m),
        None => enumerate_compositions(a.n),
    }
    .map_err(|e| usage(PATH, e.to_string()))?;
    Ok(CliOutput::ok(match mode {
        OutputMode::Text => {
            let mut s = String::new();
            for c in &list {
                let parts: Vec<String> = c.parts().iter().map(ToString::to_string).collect();
                let _ = writeln!(s, "{}", parts.join(" "));
            }
            s
        }
        OutputMode::Json => {
            let mut s = serde_json::to_string(&list).expect("compositions serialize");
            s.push('\n');
            s
        }
    }))
}

/// Rounds to 12 significant digits; `-0` becomes `0`.
fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let v: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

fn fmt12(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        sig12(x).to_string()
    }
}

fn fmt_complex(re: f64, im: f64) -> String {
    let (re, im) = (sig12(re), sig12(im));
    if im == 0.0 {
        fmt12(re)
    } else if re == 0.0 {
        format!("{}i", fmt12(im))
    } else if im < 0.0 {
        format!("{}-{}i", fmt12(re), fmt12(-im))
    } else {
        format!("{}+{}i", fmt12(re), fmt12(im))
    }
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

#[derive(Serialize)]
struct CharacterRecord {
    k: u64,
    index: usize,
    order: u64,
    parity: &'static str,
    principal: bool,
    primitive: bool,
    exponents: Vec<u64>,
    /// `[re, im]` of `χ(n)` for `n = 0..k`.
    values: Vec<[f64; 2]>,
}

impl CharacterRecord {
    fn of(c: &DirichletCharacter) -> Self {
        CharacterRecord {
            k: c.modulus(),
            index: c.index(),
            order: c.order(),
            parity: parity_name(c.parity()),
            principal: c.is_principal(),
            primitive: c.is_primitive(),
            exponents: c.exponents().to_vec(),
            values: c.values().iter().map(|z| [sig12(z.re), sig12(z.im)]).collect(),
        }
    }
}

fn characters(a: &CharactersArgs, mode: OutputMode) -> CmdResult {
    const PATH: &[&str] = &["characters"];
    if a.k == 0 {
        return Err(usage(PATH, "--k must be positive"));
    }
    if a.k > MAX_CHARACTERS_K {
        return Err(limit(PATH, "--k", a.k, MAX_CHARACTERS_K, "character tables"));
    }
    let chars = enumerate_characters(a.k).map_err(|e| usage(PATH, e.to_string()))?;
    let records: Vec<CharacterRecord> = chars.iter().map(CharacterRecord::of).collect();
    Ok(CliOutput::ok(match mode {
        OutputMode::Json => json_line(&records),
        OutputMode::Text => {
            let mut s = String::new();
            for r in &records {
                let mut flags = vec![r.parity];
                if r.principal {
                    flags.push("principal");
                }
                if r.primitive {
                    flags.push("primitive");
                }
                let values: Vec<String> = r.values.iter().map(|[re, im]| fmt_complex(*re, *im)).collect();
                let _ = writeln!(
                    s,
                    "chi {} mod {} (order {}, {}): {}",
                    r.index,
                    r.k,
                    r.order,
                    flags.join(", "),
                    values.join(" ")
                );
            }
            s
        }
    }))
}

fn report_output(groups: &[ReportGroup], mode: OutputMode) -> CliOutput {
    CliOutput {
        code: if any_failed(groups) { 1 } else { 0 },
        stdout: emit_report(groups, mode),
        stderr: String::new(),
    }
}

fn verify_prop1(a: &Prop1Args, mode: OutputMode) -> CmdResult {
    const PATH: &[&str] = &["verify", "prop1"];
    let group = if a.float {
        if a.pmax > MAX_FLOAT_PMAX {
            return Err(limit(PATH, "--pmax", a.pmax, MAX_FLOAT_PMAX, "floating sweeps"));
        }
        if a.kmax > MAX_FLOAT_KMAX {
            return Err(limit(PATH, "--kmax", a.kmax, MAX_FLOAT_KMAX, "floating sweeps"));
        }
        if !(a.tol > 0.0 && a.tol.is_finite()) {
            return Err(usage(PATH, format!("--tol must be positive and finite, got {}", a.tol)));
        }
        let tol = FloatTolerance {
            relative: a.tol,
            absolute_scale: Some(FLOAT_ABSOLUTE_SCALE),
        };
        verify::prop1_float(a.pmax, a.kmax, tol, true)
    } else {
        if a.pmax > MAX_EXACT_PMAX {
            return Err(limit(PATH, "--pmax", a.pmax, MAX_EXACT_PMAX, "exact sweeps"));
        }
        if a.kmax > MAX_EXACT_KMAX {
            return Err(limit(PATH, "--kmax", a.kmax, MAX_EXACT_KMAX, "exact sweeps"));
        }
        verify::prop1_exact(a.pmax, a.kmax)
    };
    Ok(report_output(&[group], mode))
}

fn verify_eq3(a: &Eq3Args, mode: OutputMode) -> CmdResult {
    const PATH: &[&str] = &["verify", "eq3"];
    if a.pmax > MAX_EQ3_PMAX {
        return Err(limit(PATH, "--pmax", a.pmax, MAX_EQ3_PMAX, "reflection sweeps"));
    }
    if a.kmax > MAX_EQ3_KMAX {
        return Err(limit(PATH, "--kmax", a.kmax, MAX_EQ3_KMAX, "reflection sweeps"));
    }
    Ok(report_output(&[verify::eq3(a.pmax, a.kmax)], mode))
}

fn verify_coeffs(a: &CoeffsArgs, mode: OutputMode) -> CmdResult {
    const PATH: &[&str] = &["verify", "coeffs"];
    if a.pmax > MAX_COEFFS_PMAX {
        return Err(limit(PATH, "--pmax", a.pmax, MAX_COEFFS_PMAX, "coefficient sums"));
    }
    Ok(report_output(&[verify::coefficient_sums(a.pmax)], mode))
}

#[derive(Serialize)]
struct AlkanRecord {
    case: String,
    k: u64,
    r: u32,
    chi_index: usize,
    primitive: bool,
    lhs_magnitude: Option<f64>,
    rhs_magnitude: Option<f64>,
    ratio: Option<f64>,
    sign_observed: String,
    status: crate::report::Status,
    detail: String,
}

fn finite12(x: f64) -> Option<f64> {
    x.is_finite().then(|| sig12(x))
}

impl AlkanRecord {
    fn of(rep: &AlkanReport) -> Self {
        AlkanRecord {
            case: format!("k={},r={},chi={}", rep.k, rep.r, rep.chi_index),
            k: rep.k,
            r: rep.r,
            chi_index: rep.chi_index,
            primitive: rep.primitive,
            lhs_magnitude: finite12(rep.lhs_magnitude),
            rhs_magnitude: finite12(rep.rhs_magnitude),
            ratio: finite12(rep.ratio),
            sign_observed: rep.sign_observed.clone(),
            status: rep.status,
            detail: rep.detail.clone(),
        }
    }
}

fn verify_alkan(a: &AlkanArgs, mode: OutputMode) -> CmdResult {
    const PATH: &[&str] = &["verify", "alkan"];
    if a.k < 2 {
        return Err(usage(PATH, "--k must be at least 2"));
    }
    if a.k > MAX_ALKAN_K {
        return Err(limit(PATH, "--k", a.k, MAX_ALKAN_K, "the L-function check"));
    }
    if a.r == 0 || a.r > ALKAN_MAX_R {
        return Err(usage(PATH, format!("--r must lie in 1..={ALKAN_MAX_R}, got {}", a.r)));
    }
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(usage(PATH, format!("--tol must be positive and finite, got {}", a.tol)));
    }
    let mut reports = verify::alkan(a.k, a.r, a.tol, a.include_imprimitive)
        .map_err(|e| usage(PATH, format!("{e}; raise --tol")))?;
    reports.sort_by_key(|r| r.chi_index);
    let group = verify::alkan_group(&reports);
    let code = if group.failed() { 1 } else { 0 };
    let stdout = match mode {
        OutputMode::Json => {
            let records: Vec<AlkanRecord> = reports.iter().map(AlkanRecord::of).collect();
            json_line(&records)
        }
        OutputMode::Text => {
            let mut s = format!("{}: {}\n", group.name, group.summary());
            for rep in &reports {
                let rec = AlkanRecord::of(rep);
                let _ = write!(s, "  {} {}", rec.status.as_str(), rec.case);
                if let Some(ratio) = rec.ratio {
                    let _ = write!(s, " ratio {} sign {}", fmt12(ratio), rec.sign_observed);
                }
                if !rec.detail.is_empty() {
                    let _ = write!(s, " ({})", rec.detail);
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(CliOutput {
        code,
        stdout,
        stderr: String::new(),
    })
}
