//! `itlconform`: run, generate, validate and fuzz interval test suites.
//!
//! Exit status is 0 when nothing failed, 1 when some verdict failed or
//! errored (skips do not count), and 2 for usage errors and unreadable or
//! malformed input.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use itlconform::generator::{self, Category, GenPlan};
use itlconform::harness::{self, Format, Report, RunOptions, PROVIDER_NAMES};
use itlconform::itl::{self, Severity, TestSuite};
use itlconform::judge::{AccuracyMode, Level, Status};
use itlconform::Op;

#[derive(Parser)]
#[command(name = "itlconform", version, about = "Conformance testing for set-based interval arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Tightest,
    Accurate,
    Valid,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Ndjson,
}

#[derive(Subcommand)]
enum Command {
    /// Run suites against a provider and report verdicts.
    Run {
        #[arg(required = true)]
        suites: Vec<PathBuf>,
        #[arg(long, default_value = "reference")]
        provider: String,
        /// Judge every assertion at this level instead of its own.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Width slack for valid mode.
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        /// Keep assertions whose testcase or operation matches this glob.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads, sharded by testcase.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Generate an oracle-certified suite.
    Gen {
        /// Comma-separated operation names; all by default.
        #[arg(long, value_delimiter = ',')]
        ops: Vec<String>,
        /// Comma-separated categories; all by default.
        #[arg(long, value_delimiter = ',')]
        categories: Vec<String>,
        #[arg(long, default_value_t = generator::DEFAULT_COUNT)]
        count: usize,
        #[arg(long, env = "ITLCONFORM_SEED", default_value_t = 1788)]
        seed: u64,
        /// Writes the suite here and its provenance next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every expected value against the oracle.
    Validate {
        #[arg(required = true)]
        suites: Vec<PathBuf>,
    },
    /// Randomised inclusion checks over the seeded corpus.
    Fuzz {
        /// Only corpus cases for this operation.
        #[arg(long)]
        op: Option<String>,
        /// Points per input.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, env = "ITLCONFORM_SEED", default_value_t = 1788)]
        seed: u64,
        #[arg(long, default_value = "reference")]
        provider: String,
    },
}

/// A failure that ends the run with status 2.
struct Usage(String);

type Outcome = Result<u8, Usage>;

fn load(path: &Path) -> Result<TestSuite, Usage> {
    let parsed = itl::parse_file(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    for d in &parsed.diagnostics {
        eprintln!("{}:{d}", path.display());
    }
    if parsed.diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(Usage(format!("{}: malformed suite", path.display())));
    }
    Ok(parsed.suite)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Usage> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Usage(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Usage(e.to_string())),
    }
}

fn provider(name: &str) -> Result<Box<dyn harness::Provider>, Usage> {
    harness::provider_by_name(name)
        .ok_or_else(|| Usage(format!("unknown provider '{name}' (known: {})", PROVIDER_NAMES.join(", "))))
}

#[allow(clippy::too_many_arguments)]
fn run(
    suites: &[PathBuf],
    provider_name: &str,
    mode: Option<ModeArg>,
    tau: f64,
    filter: Option<&str>,
    format: FormatArg,
    out: Option<&Path>,
    jobs: usize,
) -> Outcome {
    let p = provider(provider_name)?;
    if tau.is_nan() || tau < 0.0 {
        return Err(Usage(format!("--tau must be nonnegative, got {tau}")));
    }
    let mode = mode.map(|m| match m {
        ModeArg::Tightest => AccuracyMode::TIGHTEST,
        ModeArg::Accurate => AccuracyMode::ACCURATE,
        ModeArg::Valid => AccuracyMode { level: Level::Valid, tau },
    });
    let filter = filter
        .map(|f| glob::Pattern::new(f).map_err(|e| Usage(format!("--filter: {e}"))))
        .transpose()?;
    let opts = RunOptions { mode, filter, jobs };
    let loaded = suites.iter().map(|s| load(s)).collect::<Result<Vec<_>, _>>()?;
    // Provider panics become error verdicts; their messages are in the report.
    std::panic::set_hook(Box::new(|_| {}));
    let reports: Vec<Report> = loaded.iter().map(|s| harness::run_suite_with(p.as_ref(), s, &opts)).collect();
    let _ = std::panic::take_hook();
    let report = Report::merge(reports);
    let format = match format {
        FormatArg::Text => Format::Text,
        FormatArg::Ndjson => Format::Ndjson,
    };
    emit(out, &harness::render_report(&report, format))?;
    Ok(report.exit_code() as u8)
}

fn gen(ops: &[String], categories: &[String], count: usize, seed: u64, out: Option<&Path>) -> Outcome {
    let categories = if categories.is_empty() {
        Category::ALL.to_vec()
    } else {
        categories.iter().map(|c| c.parse::<Category>().map_err(Usage)).collect::<Result<_, _>>()?
    };
    let ops = if ops.is_empty() { Op::ALL.iter().map(|o| o.name().to_string()).collect() } else { ops.to_vec() };
    let g = generator::generate(&GenPlan { ops, categories, count, seed });
    for l in &g.log {
        eprintln!("{l}");
    }
    emit(out, &g.itl())?;
    if let Some(p) = out {
        let side = p.with_extension("provenance");
        fs::write(&side, g.provenance_text()).map_err(|e| Usage(format!("{}: {e}", side.display())))?;
    }
    let n: usize = g.suite.testcases.iter().map(|t| t.assertions.len()).sum();
    eprintln!("generated {n} assertions in {} testcases", g.suite.testcases.len());
    Ok(0)
}

fn validate(suites: &[PathBuf]) -> Outcome {
    let mut code = 0;
    for path in suites {
        let suite = load(path)?;
        let r = generator::self_validate(&suite);
        print!("{}: {}", path.display(), r.render());
        code = code.max(r.exit_code());
    }
    Ok(code as u8)
}

fn fuzz(op: Option<&str>, n: usize, seed: u64, provider_name: &str) -> Outcome {
    if n == 0 {
        return Err(Usage("--n must be at least 1".into()));
    }
    let p = provider(provider_name)?;
    let op = op.map(|o| Op::from_name(o).ok_or_else(|| Usage(format!("unknown operation '{o}'")))).transpose()?;
    let corpus: Vec<_> = generator::fuzz_corpus(seed).into_iter().filter(|c| op.is_none_or(|o| c.op == o)).collect();
    if corpus.is_empty() {
        return Err(Usage("no corpus case for that operation".into()));
    }
    std::panic::set_hook(Box::new(|_| {}));
    let (mut checks, mut bad) = (0usize, 0usize);
    for (i, case) in corpus.iter().enumerate() {
        let verdicts = generator::fuzz_check(p.as_ref(), case.op, &case.args, n, seed.wrapping_add(i as u64));
        checks += verdicts.len();
        for v in verdicts.iter().filter(|v| matches!(v.status, Status::Fail | Status::Error)) {
            bad += 1;
            println!("{} {} box={} at={} reason={}", v.status.name().to_uppercase(), case.op, v.expected, v.observed, v.reason);
        }
    }
    let _ = std::panic::take_hook();
    println!("FUZZ cases={} checks={checks} bad={bad}", corpus.len());
    Ok(u8::from(bad > 0))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Run { suites, provider, mode, tau, filter, format, out, jobs } => {
            run(suites, provider, *mode, *tau, filter.as_deref(), *format, out.as_deref(), *jobs)
        }
        Command::Gen { ops, categories, count, seed, out } => gen(ops, categories, *count, *seed, out.as_deref()),
        Command::Validate { suites } => validate(suites),
        Command::Fuzz { op, n, seed, provider } => fuzz(op.as_deref(), *n, *seed, provider),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Usage(msg)) => {
            eprintln!("itlconform: {msg}");
            ExitCode::from(2)
        }
    }
}
