//! Command-line front end: `count`, `enumerate`, `bijection` and `verify`.
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage error, 3 input
//! outside a formula's preconditions.

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use circsep::bijection::{zag, zig, ZigZagTrace};
use circsep::count::{
    count_system, count_system_convolution, count_system_fixed, count_system_fixed_recursive,
};
use circsep::enumerate::{count_by_enumeration, enumerate_gap, EnumerationRequest};
use circsep::system::{flatten_set, unflatten_set};
use circsep::verify::{parse_checks, verify_all, IdentityReport, Summary, SweepGrid};
use circsep::{CircleSystem, CountValue, Element, Error, SelectionSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "circsep",
    version,
    about = "Count, enumerate and map s-separated k-sets in systems of circles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the number of s-separated k-sets.
    Count(CountArgs),
    /// List the s-separated k-sets in canonical order.
    Enumerate(EnumerateArgs),
    /// Map a set through the two-circle bijection or its inverse.
    Bijection(BijectionArgs),
    /// Sweep a parameter grid and check every identity.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Closed-form formula.
    Closed,
    /// Fixed-element recursion over the circles (requires --fixed 1@1).
    Recursive,
    /// Sum over distributions of k among the circles.
    Convolution,
    /// Count by enumeration; valid for any input.
    Enumerate,
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    /// Circle sizes, comma separated (e.g. 8,7).
    #[arg(long)]
    pub sizes: CircleSystem,
    /// Minimum number of objects between two chosen objects on a circle.
    #[arg(long = "s")]
    pub s: usize,
    /// Number of chosen objects.
    #[arg(long = "k")]
    pub k: usize,
    /// Element every set must contain, as POS@CIRCLE.
    #[arg(long)]
    pub fixed: Option<Element>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Stop after this many sets.
    #[arg(long)]
    pub limit: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Two-circle set containing 1@1 -> single-circle set containing 1.
    Forward,
    /// Single-circle set containing 1 -> two-circle set containing 1@1.
    Backward,
}

#[derive(Debug, Args)]
pub struct BijectionArgs {
    #[arg(value_enum)]
    pub direction: Direction,
    /// Two circle sizes, n1,n2.
    #[arg(long)]
    pub sizes: CircleSystem,
    #[arg(long = "s")]
    pub s: usize,
    /// The input set: POS@CIRCLE list for forward, bare positions for backward.
    #[arg(long)]
    pub set: String,
    /// Also print the switch trace as JSON.
    #[arg(long)]
    pub trace: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated checks, or "all".
    #[arg(long, default_value = "all")]
    pub checks: String,
    #[arg(long, default_value_t = 1)]
    pub min_size: usize,
    #[arg(long, default_value_t = 10)]
    pub max_size: usize,
    #[arg(long, default_value_t = 1)]
    pub min_k: usize,
    #[arg(long, default_value_t = 3)]
    pub max_k: usize,
    #[arg(long, default_value_t = 1)]
    pub min_s: usize,
    #[arg(long, default_value_t = 2)]
    pub max_s: usize,
    /// Largest number of circles for multi-circle checks.
    #[arg(long, default_value_t = 2)]
    pub max_circles: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// A failure that maps onto an exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Failed(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Failed(_) | CliError::Io(_) => EXIT_FAILED,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(m) => write!(f, "domain error: {m}"),
            CliError::Failed(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(m) => CliError::Domain(m),
            Error::Parse(_) | Error::InvalidElement(_) | Error::InvalidSystem(_) => {
                CliError::Usage(e.to_string())
            }
            Error::Inexact { .. } | Error::Invariant(_) => CliError::Failed(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

type CliResult<T = i32> = Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = if code == 0 {
                e.to_string()
            } else {
                e.render().to_string()
            };
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(&cli.command, out).and_then(|code| out.flush().map(|_| code).map_err(Into::into))
    {
        Ok(code) => code,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "circsep: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> CliResult {
    match command {
        Command::Count(args) => run_count(args, out),
        Command::Enumerate(args) => run_enumerate(args, out),
        Command::Bijection(args) => run_bijection(args, out),
        Command::Verify(args) => run_verify(args, out),
    }
}

#[derive(Serialize)]
struct CountRecord<'a> {
    sizes: &'a [usize],
    s: usize,
    k: usize,
    fixed: Option<String>,
    method: Method,
    count: &'a CountValue,
}

fn request(args: &SystemArgs) -> CliResult<EnumerationRequest> {
    let req = EnumerationRequest::new(args.sizes.clone(), args.s, args.k);
    Ok(match args.fixed {
        Some(f) => req.with_fixed(f)?,
        None => req,
    })
}

fn run_count(args: &CountArgs, out: &mut dyn Write) -> CliResult {
    let SystemArgs {
        sizes: sys,
        s,
        k,
        fixed,
    } = &args.system;
    let (s, k) = (*s, *k);
    let anchor = Element::new(1, 1)?;
    let count = match (args.method, fixed) {
        (Method::Closed, None) => count_system(sys, s, k)?,
        (Method::Closed, Some(f)) => count_system_fixed(sys, s, k, f)?,
        (Method::Recursive, Some(f)) if *f == anchor => count_system_fixed_recursive(sys, s, k)?,
        (Method::Recursive, _) => {
            return Err(CliError::Usage(
                "--method recursive counts sets through 1@1 and requires --fixed 1@1".into(),
            ))
        }
        (Method::Convolution, None) => count_system_convolution(sys, s, k)?,
        (Method::Convolution, Some(_)) => {
            return Err(CliError::Usage(
                "--method convolution does not take --fixed".into(),
            ))
        }
        (Method::Enumerate, _) => count_by_enumeration(&request(&args.system)?),
    };
    let record = CountRecord {
        sizes: sys.sizes(),
        s,
        k,
        fixed: fixed.map(|f| f.to_string()),
        method: args.method,
        count: &count,
    };
    match args.format {
        Format::Text => writeln!(out, "{count}")?,
        Format::Json => writeln!(out, "{}", serde_json::to_string(&record)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["sizes", "s", "k", "fixed", "method", "count"])?;
            w.write_record([
                join(sys.sizes()),
                s.to_string(),
                k.to_string(),
                record.fixed.clone().unwrap_or_default(),
                serde_json::to_value(args.method)?
                    .as_str()
                    .unwrap_or_default()
                    .to_string(),
                count.to_string(),
            ])?;
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

fn join(values: &[usize]) -> String {
    values
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn run_enumerate(args: &EnumerateArgs, out: &mut dyn Write) -> CliResult {
    let req = request(&args.system)?;
    let sets = enumerate_gap(&req).take(args.limit.unwrap_or(usize::MAX));
    match args.format {
        Format::Text => {
            for set in sets {
                writeln!(out, "{set}")?;
            }
        }
        Format::Json => {
            write!(out, "[")?;
            for (i, set) in sets.enumerate() {
                if i > 0 {
                    write!(out, ",")?;
                }
                write!(out, "{}", serde_json::to_string(&set)?)?;
            }
            writeln!(out, "]")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record((1..=req.params.k).map(|i| format!("e{i}")))?;
            for set in sets {
                w.write_record(set.iter().map(Element::to_string))?;
            }
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

fn parse_positions(text: &str) -> CliResult<SelectionSet> {
    if text.contains('@') {
        return Err(CliError::Usage(
            "backward takes bare positions on the flattened circle, e.g. \"1,4\"".into(),
        ));
    }
    let positions = text
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("invalid position {p:?}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(SelectionSet::on_single_circle(positions)?)
}

#[derive(Serialize)]
struct BijectionRecord<'a> {
    direction: Direction,
    input: String,
    output: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a ZigZagTrace>,
}

fn run_bijection(args: &BijectionArgs, out: &mut dyn Write) -> CliResult {
    let sys = &args.sizes;
    if sys.circles() != 2 {
        return Err(CliError::Usage(format!(
            "--sizes must name exactly two circles, got {}",
            sys.circles()
        )));
    }
    let (input, output, trace) = match args.direction {
        Direction::Forward => {
            let set: SelectionSet = args.set.parse()?;
            let (z, trace) = zig(&set, sys, args.s)?;
            (
                set.to_string(),
                flatten_set(&z, sys)?.to_position_string(),
                trace,
            )
        }
        Direction::Backward => {
            let flat = parse_positions(&args.set)?;
            flat.validate(&CircleSystem::single(sys.total())?)?;
            let (z, trace) = zag(&unflatten_set(&flat, sys)?, sys, args.s)?;
            (flat.to_position_string(), z.to_string(), trace)
        }
    };
    match args.format {
        Format::Json => {
            let record = BijectionRecord {
                direction: args.direction,
                input,
                output,
                trace: args.trace.then_some(&trace),
            };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        }
        Format::Text | Format::Csv => {
            writeln!(out, "{output}")?;
            if args.trace {
                writeln!(out, "{}", serde_json::to_string(&trace)?)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn opt(v: &Option<String>) -> &str {
    v.as_deref().unwrap_or("-")
}

fn write_table(reports: &[IdentityReport], out: &mut dyn Write) -> io::Result<()> {
    writeln!(
        out,
        "{:<18} {:<12} {:>2} {:>2} {:<8} {:>12} {:>12}  note",
        "check", "sizes", "s", "k", "outcome", "left", "right"
    )?;
    for r in reports {
        let outcome = if r.documentation && r.outcome == circsep::verify::Outcome::Fail {
            "fail*".to_string()
        } else {
            r.outcome.to_string()
        };
        writeln!(
            out,
            "{:<18} {:<12} {:>2} {:>2} {:<8} {:>12} {:>12}  {}",
            r.check.name(),
            join(&r.sizes),
            r.s,
            r.k,
            outcome,
            opt(&r.left),
            opt(&r.right),
            opt(&r.note)
        )?;
    }
    Ok(())
}

fn run_verify(args: &VerifyArgs, out: &mut dyn Write) -> CliResult {
    let grid = SweepGrid {
        s: (args.min_s, args.max_s),
        k: (args.min_k, args.max_k),
        sizes: (args.min_size, args.max_size),
        circles: (1, args.max_circles),
        checks: parse_checks(&args.checks)?,
        jobs: args.jobs,
    };
    let reports = verify_all(&grid).map_err(|e| CliError::Usage(e.to_string()))?;
    let summary = Summary::of(&reports);
    match args.format {
        Format::Text => {
            write_table(&reports, out)?;
            writeln!(
                out,
                "passed {}, failed {}, skipped {}, documented failures {} (marked fail*)",
                summary.passed, summary.failed, summary.skipped, summary.documented
            )?;
        }
        Format::Json => {
            for r in &reports {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "check",
                "sizes",
                "s",
                "k",
                "outcome",
                "left",
                "right",
                "documentation",
                "note",
            ])?;
            for r in &reports {
                w.write_record([
                    r.check.name().to_string(),
                    join(&r.sizes),
                    r.s.to_string(),
                    r.k.to_string(),
                    r.outcome.to_string(),
                    r.left.clone().unwrap_or_default(),
                    r.right.clone().unwrap_or_default(),
                    r.documentation.to_string(),
                    r.note.clone().unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(if summary.all_passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}
