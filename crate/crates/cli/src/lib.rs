//! `monopiped`: command-line front end for the monoclinic piped library.
//!
//! Exit codes are shared by every subcommand: `0` for success or a valid
//! result, `2` for a well-formed but negative outcome (out of range, failing
//! equations, failed self-check), `1` for usage and I/O errors. Records and
//! tables go to standard output; run summaries go to standard error.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use monoclinic::catalog::{
    detect_format, parse_catalog, parse_records, write_catalog, CatalogItem, CatalogRecord, Format,
};
use monoclinic::families::{family, FamilyId, ParamFamily};
use monoclinic::piped::{equation_label, is_realizable, verify_equations, MonoclinicPiped};
use monoclinic::search::{brute_force, coverage, scan, CatalogEntry};
use monoclinic::validity::{classify, range_spec, Classification};
use monoclinic::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "monopiped",
    version,
    about = "Integer monoclinic parallelepipeds: generate, verify, scan and search"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one family at (m, n) and print the catalog record.
    #[command(allow_negative_numbers = true)]
    Gen {
        family: FamilyId,
        m: BigInt,
        n: BigInt,
        /// Evaluate even when n = 0 (the ratio m/n is then undefined).
        #[arg(long)]
        force: bool,
        #[arg(long, default_value_t = Format::Jsonl)]
        format: Format,
    },
    /// Check every family against the seven equations as polynomial identities.
    Identities {
        #[arg(long)]
        family: Option<FamilyId>,
    },
    /// Print a family's validity range, or classify one (m, n).
    #[command(allow_negative_numbers = true)]
    Ranges {
        family: FamilyId,
        #[arg(requires = "n")]
        m: Option<BigInt>,
        n: Option<BigInt>,
    },
    /// Enumerate coprime (m, n) up to a height and write the valid entries.
    Scan {
        /// A family name, or `all` for every family in order.
        target: ScanTarget,
        #[arg(long)]
        height: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (0 picks automatically); output does not depend on it.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, default_value_t = Format::Jsonl)]
        format: Format,
    },
    /// Check nine lengths (arguments, a file, or standard input).
    #[command(allow_negative_numbers = true)]
    Verify {
        #[arg(conflicts_with = "input")]
        values: Vec<BigInt>,
        /// Nine integers per line, or a catalog file; `-` reads standard input.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Brute-force every primitive piped with x up to a bound.
    Search {
        #[arg(long)]
        x_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, default_value_t = Format::Jsonl)]
        format: Format,
    },
    /// Match a brute-force catalog against family scan catalogs.
    Coverage {
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long)]
        scan: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ScanTarget {
    One(FamilyId),
    All,
}

impl ScanTarget {
    fn families(self) -> Vec<FamilyId> {
        match self {
            ScanTarget::One(id) => vec![id],
            ScanTarget::All => FamilyId::ALL.to_vec(),
        }
    }
}

impl FromStr for ScanTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s.eq_ignore_ascii_case("all") {
            Ok(ScanTarget::All)
        } else {
            s.parse().map(ScanTarget::One)
        }
    }
}

/// The standard streams of one invocation.
pub struct Streams<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Parses `args` (including the program name), runs the subcommand against
/// the process's standard streams and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (mut stdin, mut stdout, mut stderr) =
        (io::stdin().lock(), io::stdout().lock(), io::stderr().lock());
    run_with(
        args,
        Streams {
            stdin: &mut stdin,
            stdout: &mut stdout,
            stderr: &mut stderr,
        },
    )
}

/// Like [`run`], with caller-supplied streams.
pub fn run_with<I, T>(args: I, streams: Streams<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let (sink, code) = if e.use_stderr() {
                (streams.stderr, EXIT_USAGE)
            } else {
                (streams.stdout, EXIT_OK)
            };
            let _ = write!(sink, "{e}");
            return code;
        }
    };
    let outcome = execute(cli.command, streams.stdin, streams.stdout, streams.stderr);
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_NEGATIVE,
        Err(e) => {
            let _ = writeln!(streams.stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// `Ok(true)` on success, `Ok(false)` on a negative but well-formed outcome.
fn execute(
    command: Command,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<bool, Error> {
    let result = match command {
        Command::Gen {
            family,
            m,
            n,
            force,
            format,
        } => cmd_gen(out, family, m, n, force, format),
        Command::Identities { family: id } => {
            let families: Vec<&ParamFamily> = match id {
                Some(id) => vec![family(id)],
                None => FamilyId::ALL.iter().map(|&id| family(id)).collect(),
            };
            Ok(identities_table(&families, out)?)
        }
        Command::Ranges { family, m, n } => match (m, n) {
            (Some(m), Some(n)) => cmd_classify(out, family, &m, &n),
            _ => cmd_ranges(out, family),
        },
        Command::Scan {
            target,
            height,
            out: path,
            threads,
            format,
        } => cmd_scan(out, err, target, height, path.as_deref(), threads, format),
        Command::Verify { values, input } => cmd_verify(stdin, out, values, input.as_deref()),
        Command::Search {
            x_max,
            out: path,
            threads,
            format,
        } => cmd_search(out, err, x_max, path.as_deref(), threads, format),
        Command::Coverage { oracle, scan } => cmd_coverage(stdin, out, &oracle, &scan),
    };
    out.flush()?;
    result
}

fn cmd_gen(
    out: &mut dyn Write,
    id: FamilyId,
    m: BigInt,
    n: BigInt,
    force: bool,
    format: Format,
) -> Result<bool, Error> {
    if n == BigInt::ZERO && !force {
        return Err(Error::InvalidArgument(
            "n = 0 leaves m/n undefined; pass --force to evaluate anyway".into(),
        ));
    }
    let class = classify(id, &m, &n);
    let entry = CatalogEntry::from_family(id, m, n)?;
    write_catalog(out, &[(entry, Some(class))], format)?;
    Ok(class == Classification::Valid)
}

/// Prints the family × check table (seven equations plus the 3:4:5 edge
/// ratio), names every failing residual, and returns whether all checks pass.
pub fn identities_table<W: Write + ?Sized>(
    families: &[&ParamFamily],
    out: &mut W,
) -> io::Result<bool> {
    let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
    write!(out, "family")?;
    for k in 1..=7 {
        write!(out, "{:>6}", format!("({k})"))?;
    }
    writeln!(out, "{:>7}", "3:4:5")?;
    let mut failures = Vec::new();
    let mut passed = 0;
    for fam in families {
        let report = fam.identity_report();
        let ratio = fam.ratio_345_holds();
        write!(out, "{:<6}", fam.id.as_str())?;
        for ok in report.passes() {
            write!(out, "{:>6}", mark(ok))?;
        }
        writeln!(out, "{:>7}", mark(ratio))?;
        passed += report.passes().iter().filter(|&&ok| ok).count() + usize::from(ratio);
        for (k, residual) in report.failures() {
            failures.push(format!(
                "{} ({k}) {}: residual {residual}",
                fam.id,
                equation_label(k)
            ));
        }
        if !ratio {
            failures.push(format!("{} edge ratio x : y : a is not 3 : 4 : 5", fam.id));
        }
    }
    for line in &failures {
        writeln!(out, "{line}")?;
    }
    let total = families.len() * 8;
    writeln!(out, "{passed}/{total} checks pass")?;
    Ok(passed == total)
}

fn cmd_ranges(out: &mut dyn Write, id: FamilyId) -> Result<bool, Error> {
    let spec = range_spec(id);
    writeln!(out, "{id} is valid for t = m/n in:")?;
    for iv in &spec.intervals {
        writeln!(out, "  {iv}")?;
    }
    let report = spec.self_check();
    writeln!(out, "root certification:")?;
    for bound in &report.bounds {
        writeln!(out, "  {bound}")?;
    }
    let passed = report.passed();
    writeln!(
        out,
        "self-check {}",
        if passed { "passed" } else { "FAILED" }
    )?;
    Ok(passed)
}

fn cmd_classify(out: &mut dyn Write, id: FamilyId, m: &BigInt, n: &BigInt) -> Result<bool, Error> {
    let class = classify(id, m, n);
    writeln!(out, "{id}({m}, {n}): {class}")?;
    Ok(class == Classification::Valid)
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Error> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Opens the destination before any work is done, so a bad path fails fast.
fn open_output(path: Option<&Path>) -> Result<Option<BufWriter<File>>, Error> {
    path.map(|p| {
        File::create(p)
            .map(BufWriter::new)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", p.display())))
    })
    .transpose()
}

fn emit(
    stdout: &mut dyn Write,
    file: Option<BufWriter<File>>,
    items: &[CatalogItem],
    format: Format,
) -> Result<(), Error> {
    match file {
        Some(mut f) => {
            write_catalog(&mut f, items, format)?;
            f.flush()?;
            Ok(())
        }
        None => write_catalog(stdout, items, format),
    }
}

fn cmd_scan(
    out: &mut dyn Write,
    err: &mut dyn Write,
    target: ScanTarget,
    height: u32,
    path: Option<&Path>,
    threads: Option<usize>,
    format: Format,
) -> Result<bool, Error> {
    if height == 0 {
        return Err(Error::InvalidArgument("--height must be at least 1".into()));
    }
    let file = open_output(path)?;
    let mut items = Vec::new();
    for id in target.families() {
        let outcome = with_threads(threads, || scan(id, height))??;
        writeln!(
            err,
            "{id}: {} pairs tried, {} valid, {} unique primitives",
            outcome.pairs_tried,
            outcome.valid_pairs,
            outcome.entries.len()
        )?;
        items.extend(outcome.entries.into_iter().map(|e| (e, None)));
    }
    emit(out, file, &items, format)?;
    Ok(true)
}

fn cmd_search(
    out: &mut dyn Write,
    err: &mut dyn Write,
    x_max: u64,
    path: Option<&Path>,
    threads: Option<usize>,
    format: Format,
) -> Result<bool, Error> {
    let file = open_output(path)?;
    let entries = with_threads(threads, || brute_force(x_max))??;
    writeln!(err, "{} found", entries.len())?;
    let items: Vec<CatalogItem> = entries.into_iter().map(|e| (e, None)).collect();
    emit(out, file, &items, format)?;
    Ok(true)
}

fn read_input(stdin: &mut dyn Read, path: &Path) -> Result<String, Error> {
    if path == Path::new("-") {
        let mut text = String::new();
        stdin.read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
    }
}

/// Tuples to verify from free text: either a catalog file (raw lengths of
/// each record) or one line of nine integers per tuple.
pub fn tuples_from_text(text: &str) -> Result<Vec<MonoclinicPiped>, Error> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty());
    let is_catalog = first.is_some_and(|l| l.starts_with('{') || l.starts_with("family"));
    if is_catalog {
        return parse_records(text, detect_format(text))?
            .iter()
            .map(raw_lengths)
            .collect();
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, line)| {
            let values = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<BigInt>().map_err(|e| format!("{t:?}: {e}")))
                .collect::<Result<Vec<_>, _>>()
                .and_then(|v| tuple_from_values(v).map_err(|e| e.to_string()));
            values.map_err(|message| Error::CatalogParse {
                line: k + 1,
                message,
            })
        })
        .collect()
}

fn raw_lengths(record: &CatalogRecord) -> Result<MonoclinicPiped, Error> {
    let fields = [
        &record.x, &record.y, &record.z, &record.a, &record.b, &record.c1, &record.c2, &record.d1,
        &record.d2,
    ];
    let values = fields
        .iter()
        .map(|s| {
            s.parse::<BigInt>()
                .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    tuple_from_values(values)
}

fn tuple_from_values(values: Vec<BigInt>) -> Result<MonoclinicPiped, Error> {
    let count = values.len();
    let lengths: [BigInt; 9] = values
        .try_into()
        .map_err(|_| Error::InvalidArgument(format!("expected nine integers, got {count}")))?;
    MonoclinicPiped::new(lengths)
}

fn cmd_verify(
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    values: Vec<BigInt>,
    input: Option<&Path>,
) -> Result<bool, Error> {
    let tuples = if !values.is_empty() {
        vec![tuple_from_values(values)?]
    } else {
        tuples_from_text(&read_input(stdin, input.unwrap_or(Path::new("-")))?)?
    };
    if tuples.is_empty() {
        return Err(Error::InvalidArgument("no tuple to verify".into()));
    }
    let mut all_good = true;
    for p in &tuples {
        let report = verify_equations(p);
        writeln!(out, "{p}")?;
        for (k, ok) in report.passes.iter().enumerate() {
            let label = equation_label(k + 1);
            writeln!(
                out,
                "  ({}) {label:<27} {}",
                k + 1,
                if *ok { "pass" } else { "FAIL" }
            )?;
        }
        let realizable = is_realizable(p);
        writeln!(
            out,
            "  realizable: {}",
            if realizable { "yes" } else { "no" }
        )?;
        all_good &= report.all_pass() && realizable;
    }
    Ok(all_good)
}

fn load_catalog(stdin: &mut dyn Read, path: &Path) -> Result<Vec<CatalogEntry>, Error> {
    let text = read_input(stdin, path)?;
    let items =
        parse_catalog(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Ok(items.into_iter().map(|(entry, _)| entry).collect())
}

fn cmd_coverage(
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    oracle: &Path,
    scans: &Path,
) -> Result<bool, Error> {
    let oracle = load_catalog(stdin, oracle)?;
    let scans = load_catalog(stdin, scans)?;
    let report = coverage(&oracle, &scans)?;
    for (entry, source) in &report.matched {
        writeln!(out, "matched {} <- {source}", entry.primitive)?;
    }
    for entry in &report.unmatched {
        writeln!(out, "unmatched {}", entry.primitive)?;
    }
    writeln!(
        out,
        "{} matched, {} unmatched",
        report.matched.len(),
        report.unmatched.len()
    )?;
    Ok(true)
}
