//! The `regen-bounds` command line.
//!
//! Exit codes: 0 on success or PASS, 1 on FAIL, 2 on bad input.

pub mod format;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::codes::{
    build_congruence_family, builtin_code_423, builtin_code_433, verify_parity_structure,
    verify_recovery, verify_repair, CodeReport, RegeneratingCodeSpec,
};
use crate::envelope::{evaluate_best, figure_families, tradeoff_boundary, upper_envelope, Family};
use crate::error::{Error, Result};
use crate::generators::{
    cutset_bounds, enumerate_bounds, enumerate_packings, verify_certificate, BoundKey,
    EnumerationLimits, LmMode,
};
use crate::model::rational::parse_rational;
use crate::model::{Rational, SystemParams};

use format::Evaluation;

/// Environment variable fixing the worker thread count.
pub const THREADS_ENV: &str = "REGEN_BOUNDS_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "regen-bounds",
    version,
    about = "Outer bounds and code checks for exact-repair regenerating codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate certified linear bounds.
    Bounds(BoundsArgs),
    /// Lower envelope of a bound family in (α/β, B/β).
    Envelope(EnvelopeArgs),
    /// Trade-off boundaries of the four bound families in (α/B, β/B).
    Tradeoff(CommonArgs),
    /// Check the certificate of a bound.
    Certify(CertifyArgs),
    /// Write the spec of an explicit code.
    Construct(ConstructArgs),
    /// Check recovery, repair and parity structure of a code spec.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    #[arg(short = 'k')]
    k: usize,
    #[arg(short = 'd')]
    d: usize,
    /// Caps: chain length, rectangles per packing, refinements.
    #[arg(long, value_parser = parse_caps, default_value = "6,4,8")]
    caps: (usize, usize, usize),
    #[arg(long, value_parser = parse_mode, default_value = "auto")]
    mode: LmMode,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

impl CommonArgs {
    fn params(&self) -> Result<SystemParams> {
        SystemParams::new(self.k, self.d)
    }

    fn limits(&self) -> EnumerationLimits {
        EnumerationLimits {
            max_chain: self.caps.0,
            max_rectangles: self.caps.1,
            max_refinements: self.caps.2,
            mode: self.mode,
        }
    }
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Also report the tightest bound at this α (needs --beta).
    #[arg(long, value_parser = parse_rat, requires = "beta")]
    alpha: Option<Rational>,
    #[arg(long, value_parser = parse_rat, requires = "alpha")]
    beta: Option<Rational>,
}

#[derive(Args, Debug)]
struct EnvelopeArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = FamilyArg::All)]
    family: FamilyArg,
    /// With --family singleton-fixed-ell: the one ℓ to use.
    #[arg(long)]
    ell: Option<usize>,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(short = 'k')]
    k: Option<usize>,
    #[arg(short = 'd')]
    d: Option<usize>,
    /// Bound id such as `c3a4b6`.
    #[arg(long)]
    id: Option<String>,
    /// Bounds file or single bound JSON (`-` for stdin).
    #[arg(long, conflicts_with_all = ["k", "d"])]
    input: Option<String>,
    #[arg(long, value_parser = parse_caps, default_value = "6,4,8")]
    caps: (usize, usize, usize),
    #[arg(long, value_parser = parse_mode, default_value = "auto")]
    mode: LmMode,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(
        long,
        value_enum,
        conflicts_with = "builtin",
        required_unless_present = "builtin"
    )]
    family: Option<CodeFamily>,
    #[arg(short = 'd')]
    d: Option<usize>,
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Code spec JSON, `-` for stdin.
    #[arg(default_value = "-")]
    input: String,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Cutset,
    SingletonFixedEll,
    SingletonMixedEll,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CodeFamily {
    Congruence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Builtin {
    #[value(name = "423")]
    Code423,
    #[value(name = "433")]
    Code433,
}

fn parse_caps(text: &str) -> std::result::Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = text.split(',').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err("expected three comma-separated caps".into());
    };
    let one = |s: &str| match s.trim().parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("cap {s:?} is not a positive integer")),
    };
    Ok((one(a)?, one(b)?, one(c)?))
}

fn parse_mode(text: &str) -> std::result::Result<LmMode, String> {
    text.parse().map_err(|e: Error| e.to_string())
}

fn parse_rat(text: &str) -> std::result::Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

/// Result of a command: the text to emit and whether its checks passed.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, passed: true }
    }
}

/// Runs with the process arguments.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Runs with explicit arguments (the first is the program name).
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return 2;
    }
    let (outcome, output) = match dispatch(cli.command) {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Err(e) = emit(&outcome.text, output.as_deref()) {
        eprintln!("error: {e}");
        return 2;
    }
    if outcome.passed {
        0
    } else {
        1
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| Error::Argument(format!("{THREADS_ENV}={value:?} is not a thread count")))?;
    // A pool may already exist when running in-process more than once.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

/// Writes to `path` via a temporary file in the same directory, or to
/// stdout.
fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    let io = |e: std::io::Error| Error::Argument(format!("cannot write output: {e}"));
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
            {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => other.map_err(io),
            }
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
            tmp.write_all(text.as_bytes()).map_err(io)?;
            tmp.persist(path).map_err(|e| io(e.error))?;
            Ok(())
        }
    }
}

fn read_input(source: &str) -> Result<String> {
    let mut text = String::new();
    if source == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Parse(format!("cannot read stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(source)
            .map_err(|e| Error::Parse(format!("cannot read {source}: {e}")))?;
    }
    Ok(text)
}

fn dispatch(command: Command) -> Result<(Outcome, Option<PathBuf>)> {
    match command {
        Command::Bounds(args) => {
            let output = args.common.output.clone();
            Ok((cmd_bounds(&args)?, output))
        }
        Command::Envelope(args) => {
            let output = args.common.output.clone();
            Ok((cmd_envelope(&args)?, output))
        }
        Command::Tradeoff(args) => {
            let output = args.output.clone();
            Ok((cmd_tradeoff(&args)?, output))
        }
        Command::Certify(args) => {
            let output = args.output.clone();
            Ok((cmd_certify(&args)?, output))
        }
        Command::Construct(args) => {
            let output = args.output.clone();
            Ok((cmd_construct(&args)?, output))
        }
        Command::Verify(args) => {
            let output = args.output.clone();
            Ok((cmd_verify(&args)?, output))
        }
    }
}

fn cmd_bounds(args: &BoundsArgs) -> Result<Outcome> {
    let params = args.common.params()?;
    let enumeration = enumerate_bounds(&params, &args.common.limits())?;
    let evaluation = match (&args.alpha, &args.beta) {
        (Some(alpha), Some(beta)) => {
            let (value, bound) = evaluate_best(&enumeration.bounds, alpha, beta)?;
            Some(Evaluation::new(alpha, beta, &value, bound))
        }
        _ => None,
    };
    Ok(Outcome::ok(match args.common.format {
        OutputFormat::Json => format::bounds_json(&enumeration, evaluation),
        OutputFormat::Csv => {
            let mut text = format::bounds_csv(&enumeration);
            if let Some(e) = evaluation {
                text = format!(
                    "# best at alpha={} beta={}: {} ({})\n{text}",
                    e.alpha, e.beta, e.value, e.id
                );
            }
            text
        }
    }))
}

fn cmd_envelope(args: &EnvelopeArgs) -> Result<Outcome> {
    let params = args.common.params()?;
    let limits = args.common.limits();
    if args.ell.is_some() && args.family != FamilyArg::SingletonFixedEll {
        return Err(Error::Argument(
            "--ell only applies to --family singleton-fixed-ell".into(),
        ));
    }
    let bounds = match (args.family, args.ell) {
        (FamilyArg::SingletonFixedEll, Some(ell)) => {
            enumerate_packings(&params, &limits, |l, m| l == ell && m == 1)?.bounds
        }
        (family, _) => {
            let wanted = match family {
                FamilyArg::Cutset => Family::Cutset,
                FamilyArg::SingletonFixedEll => Family::SingletonFixedEll,
                FamilyArg::SingletonMixedEll => Family::SingletonMixedEll,
                FamilyArg::All => Family::All,
            };
            if wanted == Family::Cutset {
                cutset_bounds(&params)
            } else if wanted == Family::All {
                enumerate_bounds(&params, &limits)?.bounds
            } else {
                figure_families(&params, &limits)?
                    .into_iter()
                    .find(|(f, _)| *f == wanted)
                    .map(|(_, b)| b)
                    .expect("every family is produced")
            }
        }
    };
    let envelope = upper_envelope(&bounds)?;
    Ok(Outcome::ok(match args.common.format {
        OutputFormat::Json => format::envelope_json(&params, &envelope),
        OutputFormat::Csv => format::envelope_csv(&envelope),
    }))
}

fn cmd_tradeoff(args: &CommonArgs) -> Result<Outcome> {
    let params = args.params()?;
    let curves = figure_families(&params, &args.limits())?
        .into_iter()
        .map(|(family, bounds)| Ok((family, tradeoff_boundary(&bounds)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::ok(match args.format {
        OutputFormat::Json => format::tradeoff_json(&params, &curves),
        OutputFormat::Csv => format::tradeoff_csv(&curves),
    }))
}

fn cmd_certify(args: &CertifyArgs) -> Result<Outcome> {
    let mut bounds = match (&args.input, args.k, args.d) {
        (Some(source), _, _) => format::parse_bounds(&read_input(source)?)?,
        (None, Some(k), Some(d)) => {
            let params = SystemParams::new(k, d)?;
            let limits = EnumerationLimits {
                max_chain: args.caps.0,
                max_rectangles: args.caps.1,
                max_refinements: args.caps.2,
                mode: args.mode,
            };
            enumerate_bounds(&params, &limits)?.bounds
        }
        _ => return Err(Error::Argument("give -k and -d, or --input".into())),
    };
    if let Some(id) = &args.id {
        let raw = BoundKey::parse_id(id)?;
        let g = [raw.a, raw.b]
            .iter()
            .fold(raw.c, |g, &x| num_integer::gcd(g, x));
        let key = BoundKey {
            c: raw.c / g,
            a: raw.a / g,
            b: raw.b / g,
        };
        bounds.retain(|b| b.key() == key);
        if bounds.is_empty() {
            return Err(Error::Argument(format!("no bound with id {id}")));
        }
    } else if args.input.is_none() {
        return Err(Error::Argument("--id is required without --input".into()));
    }
    let reports: Vec<_> = bounds.iter().map(verify_certificate).collect();
    let passed = reports.iter().all(|r| r.passed());
    let text = match args.format {
        ReportFormat::Text => reports.iter().map(|r| format!("{r}\n")).collect(),
        ReportFormat::Json => {
            let mut text = serde_json::to_string_pretty(&reports).expect("reports serialize");
            text.push('\n');
            text
        }
    };
    Ok(Outcome { text, passed })
}

fn cmd_construct(args: &ConstructArgs) -> Result<Outcome> {
    let spec = match (args.family, args.builtin) {
        (Some(CodeFamily::Congruence), _) => {
            let d = args
                .d
                .ok_or_else(|| Error::Argument("--family congruence needs -d".into()))?;
            build_congruence_family(d)?
        }
        (None, Some(Builtin::Code423)) => builtin_code_423(),
        (None, Some(Builtin::Code433)) => builtin_code_433(),
        (None, None) => return Err(Error::Argument("give --family or --builtin".into())),
    };
    let mut text = spec.to_json();
    text.push('\n');
    Ok(Outcome::ok(text))
}

fn run_code_checks(spec: &RegeneratingCodeSpec) -> Result<Vec<CodeReport>> {
    let mut reports = vec![verify_recovery(spec), verify_repair(spec)?];
    if spec.parity.is_some() {
        reports.push(verify_parity_structure(spec));
    }
    Ok(reports)
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome> {
    let spec = RegeneratingCodeSpec::from_json(&read_input(&args.input)?)?;
    let reports = run_code_checks(&spec)?;
    let passed = reports.iter().all(CodeReport::passed);
    let text = match args.format {
        ReportFormat::Text => {
            let mut text: String = reports.iter().map(|r| format!("{r}\n")).collect();
            text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
            text
        }
        ReportFormat::Json => {
            let value = serde_json::json!({ "verdict": if passed { "PASS" } else { "FAIL" }, "checks": reports });
            let mut text = serde_json::to_string_pretty(&value).expect("reports serialize");
            text.push('\n');
            text
        }
    };
    Ok(Outcome { text, passed })
}
