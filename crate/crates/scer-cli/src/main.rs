//! Command-line front end for the `scer` matching engine.
//!
//! Four subcommands: `find` reports occurrence positions, `witness` prints a
//! pattern's witness table, `bench` runs one reproducible instance and prints
//! its machine-cost counters, and `selftest` exercises the built-in suites.
//!
//! Exit codes: 0 on success (occurrences found / verification passed), 1 for
//! "no occurrences" or a failed verification, 2 for malformed input or usage
//! errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use scer::encoding::{byte_symbols, int_symbols, param_symbols_with_constants};
use scer::instances::{generate, InstanceConfig};
use scer::{
    oracle, preprocess, run_selftest, InvariantChecks, MatchError, Pram, Scheme, Searcher,
    SelftestConfig, Symbol, WitnessTable,
};

/// Pattern matching under substring-consistent equivalence relations.
#[derive(Parser)]
#[command(name = "scer", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report every text position whose window matches the pattern.
    Find(FindArgs),
    /// Print the pattern's witness table.
    Witness(WitnessArgs),
    /// Run one reproducible instance and print its cost counters.
    Bench(BenchArgs),
    /// Run the built-in test suites and report pass/fail.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    /// Literal symbol equality.
    Exact,
    /// Bijective renaming of parameter symbols.
    Param,
    /// Cartesian-tree shape of an integer sequence.
    Cartesian,
}

impl SchemeArg {
    fn to_scheme(self) -> Scheme {
        match self {
            SchemeArg::Exact => Scheme::Exact,
            SchemeArg::Param => Scheme::Parameterized,
            SchemeArg::Cartesian => Scheme::CartesianTree,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// Each input byte is one symbol; one trailing newline is ignored.
    Bytes,
    /// Whitespace-separated signed decimal integers.
    Ints,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    /// The parallel duel-and-sweep engine.
    Duel,
    /// The quadratic reference scan.
    Naive,
}

/// Flags shared by the subcommands that read symbol files.
#[derive(Args)]
struct InputArgs {
    /// Equivalence relation to match under.
    #[arg(long = "scer", value_enum, default_value_t = SchemeArg::Exact)]
    scheme: SchemeArg,

    /// Token format of the input files. Defaults to `ints` for
    /// `--scer cartesian` and `bytes` otherwise.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,

    /// Bytes to treat as constants under `--scer param`; every byte not
    /// listed is a parameter. Default: everything is a parameter.
    #[arg(long, default_value = "")]
    constants: String,
}

#[derive(Args)]
struct FindArgs {
    /// File holding the pattern.
    #[arg(short = 'p', long)]
    pattern: PathBuf,

    /// File holding the text.
    #[arg(short = 't', long)]
    text: PathBuf,

    #[command(flatten)]
    input: InputArgs,

    /// Matching engine to run.
    #[arg(long, value_enum, default_value_t = EngineArg::Duel)]
    engine: EngineArg,

    /// Print positions starting from 1 instead of 0.
    #[arg(long)]
    one_based: bool,

    /// Emit JSON instead of plain text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct WitnessArgs {
    /// File holding the pattern.
    #[arg(short = 'p', long)]
    pattern: PathBuf,

    #[command(flatten)]
    input: InputArgs,

    /// Re-check the finished table against the brute-force definition.
    #[arg(long)]
    verify: bool,

    /// Print offsets starting from 1 instead of 0.
    #[arg(long)]
    one_based: bool,

    /// Emit JSON instead of plain text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Equivalence relation to run under.
    #[arg(long = "scer", value_enum, default_value_t = SchemeArg::Exact)]
    scheme: SchemeArg,

    /// Pattern length of the generated instance.
    #[arg(short = 'm', long = "pattern-len", default_value_t = 256)]
    pattern_len: usize,

    /// Text length of the generated instance; defaults to 2m - 1.
    #[arg(short = 'n', long = "text-len")]
    text_len: Option<usize>,

    /// Seed that determines the instance.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Emit JSON instead of plain text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SelftestArgs {
    /// Instances to run per scheme in the randomized suites.
    #[arg(long)]
    instances: Option<usize>,

    /// Seed for suite generation.
    #[arg(long)]
    seed: Option<u64>,

    /// Restrict the suites to a single equivalence relation.
    #[arg(long = "scer", value_enum)]
    scheme: Option<SchemeArg>,

    /// Bytes to use as constants in generated parameterized instances;
    /// every byte not listed is a parameter.
    #[arg(long, default_value = "")]
    constants: String,

    /// Emit JSON instead of plain text.
    #[arg(long)]
    json: bool,

    /// Deliberately corrupt one engine result to prove failure detection.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Find(args) => run_find(&args),
        Command::Witness(args) => run_witness(&args),
        Command::Bench(args) => run_bench(&args),
        Command::Selftest(args) => run_suites(&args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Pick the effective token format and reject combinations the schemes
/// cannot represent.
fn resolve_format(scheme: Scheme, requested: Option<FormatArg>) -> Result<FormatArg, String> {
    let format = requested.unwrap_or(match scheme {
        Scheme::CartesianTree => FormatArg::Ints,
        _ => FormatArg::Bytes,
    });
    match (scheme, format) {
        (Scheme::CartesianTree, FormatArg::Bytes) => {
            Err("--scer cartesian works on integer sequences; use --format ints".into())
        }
        (Scheme::Parameterized, FormatArg::Ints) => {
            Err("--scer param works on byte strings; use --format bytes".into())
        }
        _ => Ok(format),
    }
}

fn parse_constants(scheme: Scheme, constants: &str) -> Result<Vec<u8>, String> {
    if !constants.is_empty() && scheme != Scheme::Parameterized {
        return Err("--constants only applies to --scer param".into());
    }
    Ok(constants.bytes().collect())
}

fn read_symbols(
    path: &Path,
    scheme: Scheme,
    format: FormatArg,
    constants: &[u8],
) -> Result<Vec<Symbol>, String> {
    let raw = fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    match format {
        FormatArg::Bytes => {
            let mut bytes = raw.as_slice();
            if let Some(rest) = bytes.strip_suffix(b"\n") {
                bytes = rest;
            }
            if let Some(rest) = bytes.strip_suffix(b"\r") {
                bytes = rest;
            }
            Ok(match scheme {
                Scheme::Parameterized => param_symbols_with_constants(bytes, constants),
                _ => byte_symbols(bytes),
            })
        }
        FormatArg::Ints => {
            let textual = std::str::from_utf8(&raw)
                .map_err(|_| format!("{}: ints input must be UTF-8 text", path.display()))?;
            let mut values = Vec::new();
            for token in textual.split_whitespace() {
                let value: i64 = token
                    .parse()
                    .map_err(|_| format!("{}: malformed integer token {token:?}", path.display()))?;
                values.push(value);
            }
            Ok(int_symbols(&values))
        }
    }
}

fn run_find(args: &FindArgs) -> Result<ExitCode, String> {
    let scheme = args.input.scheme.to_scheme();
    let format = resolve_format(scheme, args.input.format)?;
    let constants = parse_constants(scheme, &args.input.constants)?;
    let pattern = read_symbols(&args.pattern, scheme, format, &constants)?;
    let text = read_symbols(&args.text, scheme, format, &constants)?;
    if pattern.is_empty() {
        return Err(MatchError::EmptyPattern.to_string());
    }
    if pattern.len() > text.len() {
        return Err(MatchError::PatternLongerThanText {
            pattern: pattern.len(),
            text: text.len(),
        }
        .to_string());
    }

    let occurrences = match args.engine {
        EngineArg::Duel => Searcher::new(scheme)
            .find_all(&pattern, &text)
            .map_err(|e| e.to_string())?
            .occurrences,
        EngineArg::Naive => oracle::naive_occurrences(&text, &pattern, scheme),
    };

    let shift = usize::from(args.one_based);
    if args.json {
        let shifted: Vec<usize> = occurrences.iter().map(|p| p + shift).collect();
        println!("{}", serde_json::json!({ "occurrences": shifted }));
    } else {
        let mut out = String::new();
        for p in &occurrences {
            let _ = writeln!(out, "{}", p + shift);
        }
        print!("{out}");
    }
    Ok(if occurrences.is_empty() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn run_witness(args: &WitnessArgs) -> Result<ExitCode, String> {
    let scheme = args.input.scheme.to_scheme();
    let format = resolve_format(scheme, args.input.format)?;
    let constants = parse_constants(scheme, &args.input.constants)?;
    let pattern = read_symbols(&args.pattern, scheme, format, &constants)?;
    if pattern.is_empty() {
        return Err(MatchError::EmptyPattern.to_string());
    }

    let mut pram = Pram::new();
    let checks = InvariantChecks::disabled();
    let encoded = scheme.encode(&pattern);
    let table = preprocess(&mut pram, &checks, scheme, &encoded).table;

    if args.json {
        println!("{}", table.to_json());
    } else {
        let shift = usize::from(args.one_based);
        let mut out = String::new();
        for a in 0..table.len() {
            let _ = writeln!(out, "{}\t{}", a + shift, table.get(a));
        }
        print!("{out}");
    }

    if args.verify {
        let ok = table_matches_oracle(&pattern, scheme, &table);
        let verdict = if ok { "verify: PASS" } else { "verify: FAIL" };
        // In JSON mode the verdict goes to stderr so stdout stays a single
        // machine-readable object.
        if args.json {
            eprintln!("{verdict}");
        } else {
            println!("{verdict}");
        }
        if !ok {
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Brute-force re-check of a finished witness table: the zero set must equal
/// the true period set, and every non-zero entry must point at a genuine
/// mismatch.
fn table_matches_oracle(pattern: &[Symbol], scheme: Scheme, table: &WitnessTable) -> bool {
    if table.zero_offsets() != oracle::naive_zero_offsets(pattern, scheme) {
        return false;
    }
    (0..table.len()).all(|a| {
        let w = table.get(a);
        w == 0 || oracle::witness_is_valid(pattern, scheme, a, w)
    })
}

fn run_bench(args: &BenchArgs) -> Result<ExitCode, String> {
    let scheme = args.scheme.to_scheme();
    let m = args.pattern_len;
    if m < 1 {
        return Err("pattern length must be at least 1".into());
    }
    let n = args.text_len.unwrap_or(2 * m - 1);
    if n < m {
        return Err(format!("text length {n} is shorter than pattern length {m}"));
    }

    let cfg = InstanceConfig {
        scheme,
        pattern_len: m,
        text_len: n,
        alphabet: 2,
        plant: true,
        param_constants: vec![b'0', b'1'],
    };
    let (pattern, text) = generate(&cfg, args.seed);
    let outcome = Searcher::new(scheme)
        .find_all(&pattern, &text)
        .map_err(|e| e.to_string())?;

    if args.json {
        let total = outcome.ledger;
        println!(
            "{{\"time\":{},\"work\":{},\"reencodes\":{}}}",
            total.time, total.work, total.reencodes
        );
    } else {
        let total = outcome.ledger;
        let pre = outcome.preprocess_ledger;
        let search = total - pre;
        let dueling_rounds: u32 = outcome.pieces.iter().map(|p| p.dueling_rounds).sum();
        let sweeping_rounds: u32 = outcome.pieces.iter().map(|p| p.sweeping_rounds).sum();
        let mut out = String::new();
        let _ = writeln!(out, "scheme: {}", scheme.name());
        let _ = writeln!(out, "m: {m}");
        let _ = writeln!(out, "n: {n}");
        let _ = writeln!(out, "seed: {}", args.seed);
        let _ = writeln!(out, "pieces: {}", outcome.pieces.len());
        let _ = writeln!(out, "occurrences: {}", outcome.occurrences.len());
        let _ = writeln!(out, "preprocess_rounds: {}", outcome.preprocess_rounds);
        let _ = writeln!(out, "preprocess_time: {}", pre.time);
        let _ = writeln!(out, "preprocess_work: {}", pre.work);
        let _ = writeln!(out, "preprocess_reencodes: {}", pre.reencodes);
        let _ = writeln!(out, "dueling_rounds: {dueling_rounds}");
        let _ = writeln!(out, "sweeping_rounds: {sweeping_rounds}");
        let _ = writeln!(out, "search_time: {}", search.time);
        let _ = writeln!(out, "search_work: {}", search.work);
        let _ = writeln!(out, "search_reencodes: {}", search.reencodes);
        let _ = writeln!(out, "time: {}", total.time);
        let _ = writeln!(out, "work: {}", total.work);
        let _ = writeln!(out, "reencodes: {}", total.reencodes);
        print!("{out}");
    }
    Ok(ExitCode::SUCCESS)
}

fn run_suites(args: &SelftestArgs) -> Result<ExitCode, String> {
    let filter = args.scheme.map(SchemeArg::to_scheme);
    if !args.constants.is_empty() {
        if let Some(scheme) = filter {
            if scheme != Scheme::Parameterized {
                return Err("--constants only applies to --scer param".into());
            }
        }
    }

    let mut cfg = SelftestConfig::default();
    if let Some(instances) = args.instances {
        cfg.instances_per_scheme = instances;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.scheme_filter = filter;
    cfg.param_constants = args.constants.bytes().collect();
    cfg.inject_fault = args.inject_fault;

    let report = run_selftest(&cfg);
    if args.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_text());
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
