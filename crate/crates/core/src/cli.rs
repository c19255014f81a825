//! The `fm` command line: `test`, `batch` and `simulate`, all writing JSON.
//!
//! Exit codes are 0 on success, 2 for bad input and 3 for a numerical
//! failure. Floating-point values are written with 17 significant digits.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::ser::Serialize;
use serde_json::ser::Formatter;

use crate::ci::{confidence_interval, EndpointMethod};
use crate::counts::{Margin, TrialCounts};
use crate::error::Error;
use crate::inference::{z_statistic, Alternative};
use crate::mle::CaseTag;
use crate::sim::{simulate, simulate_with_threads, SimConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fm",
    version,
    about = "Farrington-Manning score test for a difference of proportions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test one two-arm table and report the confidence interval.
    Test(TestArgs),
    /// Test every row of a CSV file, one JSON line per row.
    Batch(BatchArgs),
    /// Estimate rejection rate and interval coverage by simulation.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlternativeArg {
    TwoSided,
    Greater,
    Less,
}

impl From<AlternativeArg> for Alternative {
    fn from(a: AlternativeArg) -> Self {
        match a {
            AlternativeArg::TwoSided => Alternative::TwoSided,
            AlternativeArg::Greater => Alternative::Greater,
            AlternativeArg::Less => Alternative::Less,
        }
    }
}

#[derive(Debug, Args)]
struct TestArgs {
    #[arg(long, value_parser = parse_count)]
    r1: u64,
    #[arg(long, value_parser = parse_count)]
    n1: u64,
    #[arg(long, value_parser = parse_count)]
    r2: u64,
    #[arg(long, value_parser = parse_count)]
    n2: u64,
    /// Null difference s₀ = p₁ − p₂, in (−1, 1).
    #[arg(long, value_parser = parse_decimal, allow_hyphen_values = true)]
    margin: f64,
    #[arg(long, value_enum)]
    alternative: AlternativeArg,
    /// Two-sided confidence level of the reported interval.
    #[arg(long, default_value = "0.95", value_parser = parse_decimal)]
    level: f64,
}

#[derive(Debug, Args)]
struct BatchArgs {
    /// CSV with header r1,n1,r2,n2,margin and an optional level column.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    alternative: AlternativeArg,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_parser = parse_count)]
    n1: u64,
    #[arg(long, value_parser = parse_count)]
    n2: u64,
    #[arg(long, value_parser = parse_decimal)]
    p1: f64,
    #[arg(long, value_parser = parse_decimal)]
    p2: f64,
    #[arg(long, value_parser = parse_decimal, allow_hyphen_values = true)]
    margin: f64,
    #[arg(long, default_value = "0.95", value_parser = parse_decimal)]
    level: f64,
    #[arg(long, value_enum)]
    alternative: AlternativeArg,
    #[arg(long, value_parser = parse_count)]
    replicates: u64,
    #[arg(long, value_parser = parse_count)]
    seed: u64,
    /// Worker threads; the output does not depend on this.
    #[arg(long)]
    threads: Option<usize>,
}

/// Parses plain decimal notation: optional sign, digits, optional fraction.
/// Exponents, `inf`, `nan` and locale separators are rejected.
pub fn parse_decimal(s: &str) -> Result<f64, String> {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    if !digits(int) || !digits(frac) || (int.is_empty() && frac.is_empty()) {
        return Err(format!("`{s}` is not a plain decimal number"));
    }
    s.parse::<f64>().map_err(|e| e.to_string())
}

/// Parses a nonnegative integer written with ASCII digits only.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("`{s}` is not a nonnegative integer"));
    }
    s.parse::<u64>().map_err(|e| e.to_string())
}

/// JSON formatter writing every float with 17 significant digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct SignificantDigits17;

impl Formatter for SignificantDigits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// 17 significant digits; fixed notation for moderate exponents, otherwise
/// scientific. Non-finite values become `null`.
pub fn format_f64(value: f64) -> String {
    if !value.is_finite() {
        return "null".to_owned();
    }
    if value == 0.0 {
        return if value.is_sign_negative() {
            "-0.0"
        } else {
            "0.0"
        }
        .to_owned();
    }
    let sci = format!("{value:.16e}");
    let exponent: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..=15).contains(&exponent) {
        let decimals = (16 - exponent).max(1) as usize;
        format!("{value:.decimals$}")
    } else {
        sci
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SignificantDigits17);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct TestInputs {
    pub r1: u64,
    pub n1: u64,
    pub r2: u64,
    pub n2: u64,
    pub margin: f64,
    pub level: f64,
    pub alternative: Alternative,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct MleDocument {
    pub p1d: f64,
    pub p2d: f64,
    pub case: CaseTag,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CiDocument {
    pub lower: f64,
    pub upper: f64,
    pub method_lower: EndpointMethod,
    pub method_upper: EndpointMethod,
}

/// Output of `fm test`, and of each successful `fm batch` row.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TestDocument {
    pub inputs: TestInputs,
    pub mle: MleDocument,
    pub v0: f64,
    pub z: f64,
    pub p_lower: f64,
    pub p_upper: f64,
    pub p_two_sided: f64,
    pub ci: CiDocument,
}

pub fn test_document(inputs: TestInputs) -> Result<TestDocument, Error> {
    let counts = TrialCounts::new(inputs.r1, inputs.n1, inputs.r2, inputs.n2)?;
    let margin = Margin::new(inputs.margin)?;
    if !(inputs.level > 0.0 && inputs.level < 1.0) {
        return Err(Error::InvalidLevel(inputs.level));
    }
    let test = z_statistic(&counts, margin)?;
    let ci = confidence_interval(&counts, inputs.level)?;
    Ok(TestDocument {
        inputs,
        mle: MleDocument {
            p1d: test.mle.p1d,
            p2d: test.mle.p2d,
            case: test.mle.case,
        },
        v0: test.v0,
        z: test.z,
        p_lower: test.p_lower,
        p_upper: test.p_upper,
        p_two_sided: test.p_two_sided,
        ci: CiDocument {
            lower: ci.lower,
            upper: ci.upper,
            method_lower: ci.method_lower,
            method_upper: ci.method_upper,
        },
    })
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_INPUT
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Test(args) => cmd_test(args, out, err),
        Command::Batch(args) => cmd_batch(args, out, err),
        Command::Simulate(args) => cmd_simulate(args, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "fm: cannot write output: {e}");
            EXIT_INPUT
        }
    }
}

fn cmd_test(args: TestArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let inputs = TestInputs {
        r1: args.r1,
        n1: args.n1,
        r2: args.r2,
        n2: args.n2,
        margin: args.margin,
        level: args.level,
        alternative: args.alternative.into(),
    };
    match test_document(inputs) {
        Ok(doc) => {
            writeln!(out, "{}", to_json(&doc))?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(err, "fm test: {e}")?;
            Ok(exit_code(&e))
        }
    }
}

#[derive(serde::Serialize)]
struct BatchSuccess {
    row: u64,
    #[serde(flatten)]
    doc: TestDocument,
}

#[derive(serde::Serialize)]
struct BatchFailure<'a> {
    row: u64,
    error: &'a str,
    message: String,
}

const BATCH_COLUMNS: [&str; 5] = ["r1", "n1", "r2", "n2", "margin"];
const DEFAULT_LEVEL: f64 = 0.95;

fn cmd_batch(args: BatchArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let mut reader = match csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(&args.input)
    {
        Ok(r) => r,
        Err(e) => {
            writeln!(err, "fm batch: cannot read {}: {e}", args.input.display())?;
            return Ok(EXIT_INPUT);
        }
    };
    let has_level = match reader.headers() {
        Ok(h) => {
            let names: Vec<&str> = h.iter().map(str::trim).collect();
            match names.as_slice() {
                [a, b, c, d, e] if [*a, *b, *c, *d, *e] == BATCH_COLUMNS => false,
                [a, b, c, d, e, "level"] if [*a, *b, *c, *d, *e] == BATCH_COLUMNS => true,
                _ => {
                    writeln!(
                        err,
                        "fm batch: header must be r1,n1,r2,n2,margin[,level], found {names:?}"
                    )?;
                    return Ok(EXIT_INPUT);
                }
            }
        }
        Err(e) => {
            writeln!(err, "fm batch: cannot read header: {e}")?;
            return Ok(EXIT_INPUT);
        }
    };

    let alternative: Alternative = args.alternative.into();
    for (row, record) in reader.records().enumerate() {
        let row = row as u64;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                writeln!(err, "fm batch: malformed CSV at data row {row}: {e}")?;
                return Ok(EXIT_INPUT);
            }
        };
        let line = match parse_row(&record, has_level, alternative) {
            Err(message) => to_json(&BatchFailure {
                row,
                error: "ParseError",
                message,
            }),
            Ok(inputs) => match test_document(inputs) {
                Ok(doc) => to_json(&BatchSuccess { row, doc }),
                Err(e) => to_json(&BatchFailure {
                    row,
                    error: e.code(),
                    message: e.to_string(),
                }),
            },
        };
        writeln!(out, "{line}")?;
    }
    Ok(EXIT_OK)
}

fn parse_row(
    record: &csv::StringRecord,
    has_level: bool,
    alternative: Alternative,
) -> Result<TestInputs, String> {
    let field = |i: usize| record.get(i).unwrap_or("").trim();
    let count = |i: usize| parse_count(field(i)).map_err(|e| format!("{}: {e}", BATCH_COLUMNS[i]));
    let level = match has_level {
        true if !field(5).is_empty() => {
            parse_decimal(field(5)).map_err(|e| format!("level: {e}"))?
        }
        _ => DEFAULT_LEVEL,
    };
    Ok(TestInputs {
        r1: count(0)?,
        n1: count(1)?,
        r2: count(2)?,
        n2: count(3)?,
        margin: parse_decimal(field(4)).map_err(|e| format!("margin: {e}"))?,
        level,
        alternative,
    })
}

fn cmd_simulate(args: SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let margin = match Margin::new(args.margin) {
        Ok(m) => m,
        Err(e) => {
            writeln!(err, "fm simulate: {e}")?;
            return Ok(EXIT_INPUT);
        }
    };
    let config = SimConfig {
        n1: args.n1,
        n2: args.n2,
        p1_true: args.p1,
        p2_true: args.p2,
        s0: margin,
        level: args.level,
        alternative: args.alternative.into(),
        replicates: args.replicates,
        seed: args.seed,
    };
    let result = match args.threads {
        Some(0) => Err(Error::InvalidConfig("threads must be at least 1".into())),
        Some(t) => simulate_with_threads(&config, t),
        None => simulate(&config),
    };
    match result {
        Ok(r) => {
            writeln!(out, "{}", to_json(&r))?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(err, "fm simulate: {e}")?;
            Ok(exit_code(&e))
        }
    }
}
