//! Command-line entry point: load a query file, pick a backend, execute, and
//! serialize the records as JSON.
//!
//! Exit codes: 0 success, 2 usage error, 3 query parse/validation error,
//! 4 root navigation error, 5 output serialization/IO error. Warnings never
//! change the exit code.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use log::{info, LevelFilter};

use crate::backend::{BenchmarkTier, BrowserBackend, FetchBackend, HttpBackend};
use crate::bench::{emit, run_benchmark, summarize, BenchmarkConfig};
use crate::executor::{execute, ExecError, ExecutionOptions};
use crate::query::{detect_format, parse_query, validate, QueryFormat};
use crate::record::{records_to_json, RecordValue};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_QUERY: i32 = 3;
pub const EXIT_NAVIGATION: i32 = 4;
pub const EXIT_OUTPUT: i32 = 5;

/// Environment override for the browser endpoint, consulted when
/// `--browser-endpoint` is absent.
pub const BROWSER_ENDPOINT_ENV: &str = "WEBQUERY_BROWSER_ENDPOINT";

#[derive(Debug, Parser)]
#[command(
    name = "webquery",
    version,
    about = "Execute declarative JSON5/YAML extraction queries against the web",
    subcommand_negates_reqs = true
)]
struct Cli {
    /// Query file (JSON5 or YAML)
    #[arg(short = 'q', long = "query", required = true)]
    query: Option<PathBuf>,

    /// Output file for the JSON records (stdout when absent)
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,

    /// Log verbosity on stderr
    #[arg(short = 'l', long = "log-level", value_enum, default_value_t = LogLevel::Warn)]
    log_level: LogLevel,

    /// Run browser backends without a visible display
    #[arg(long = "xvfb")]
    xvfb: bool,

    /// Force the query format instead of detecting it
    #[arg(long = "format", value_enum)]
    format: Option<FormatArg>,

    /// How pages are fetched
    #[arg(long = "backend", value_enum, default_value_t = BackendArg::Static)]
    backend: BackendArg,

    /// WebDriver endpoint, e.g. http://127.0.0.1:4444 (required with
    /// --backend browser)
    #[arg(long = "browser-endpoint")]
    browser_endpoint: Option<String>,

    /// Maximum @follow nesting depth
    #[arg(long = "max-depth", default_value_t = 5)]
    max_depth: u32,

    /// Navigation timeout in seconds
    #[arg(long = "timeout", default_value_t = 30)]
    timeout: u64,

    /// Emit non-ASCII characters raw instead of \uXXXX escapes
    #[arg(long = "no-ensure-ascii")]
    no_ensure_ascii: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the tiered benchmark protocol against generated local sites
    Bench {
        /// Comma-separated tiers to run
        #[arg(long = "tiers", default_value = "simple,medium,high")]
        tiers: String,
        /// Measured runs per query
        #[arg(long = "runs", default_value_t = 10)]
        runs: u32,
        /// Site-generation seed
        #[arg(long = "seed", default_value_t = 42)]
        seed: u64,
        /// CSV output path (summary JSON is written beside it)
        #[arg(long = "out", default_value = "benchmark.csv")]
        out: PathBuf,
        /// Unmeasured warmup runs per tier
        #[arg(long = "warmup", default_value_t = 1)]
        warmup: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LogLevel {
    Error,
    Warn,
    Info,
    Debug,
}

impl From<LogLevel> for LevelFilter {
    fn from(level: LogLevel) -> LevelFilter {
        match level {
            LogLevel::Error => LevelFilter::Error,
            LogLevel::Warn => LevelFilter::Warn,
            LogLevel::Info => LevelFilter::Info,
            LogLevel::Debug => LevelFilter::Debug,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json5,
    Yaml,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Static,
    Browser,
}

/// Everything `run` needs, resolved from flags and environment.
#[derive(Debug)]
pub struct CliConfig {
    pub query_path: PathBuf,
    pub output_path: Option<PathBuf>,
    pub log_level: LevelFilter,
    pub headless_display: bool,
    pub format_override: Option<QueryFormat>,
    pub use_browser: bool,
    pub browser_endpoint: Option<String>,
    pub ensure_ascii: bool,
    pub timeout: Duration,
    pub options: ExecutionOptions,
}

#[derive(Debug)]
pub enum Invocation {
    Run(CliConfig),
    Bench {
        config: BenchmarkConfig,
        log_level: LevelFilter,
    },
    /// --help / --version output was printed; exit cleanly.
    Exit(i32),
}

/// Parses argv into an invocation. Usage problems come back as `Err` with
/// the message to print on stderr.
pub fn parse_args<I, T>(argv: I) -> Result<Invocation, String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e)
            if e.kind() == clap::error::ErrorKind::DisplayHelp
                || e.kind() == clap::error::ErrorKind::DisplayVersion =>
        {
            let _ = e.print();
            return Ok(Invocation::Exit(EXIT_OK));
        }
        Err(e) => return Err(e.to_string()),
    };

    if let Some(Command::Bench {
        tiers,
        runs,
        seed,
        out,
        warmup,
    }) = cli.command
    {
        let mut parsed_tiers = Vec::new();
        for part in tiers.split(',') {
            let tier: BenchmarkTier = part.parse()?;
            if !parsed_tiers.contains(&tier) {
                parsed_tiers.push(tier);
            }
        }
        if runs == 0 {
            return Err("--runs must be at least 1".to_owned());
        }
        return Ok(Invocation::Bench {
            config: BenchmarkConfig {
                tiers: parsed_tiers,
                runs_per_query: runs,
                seed,
                warmup_runs: warmup,
                output_path: Some(out),
            },
            log_level: cli.log_level.into(),
        });
    }

    let query_path = cli.query.expect("clap enforces -q without a subcommand");
    let browser_endpoint = cli
        .browser_endpoint
        .or_else(|| std::env::var(BROWSER_ENDPOINT_ENV).ok());
    let use_browser = cli.backend == BackendArg::Browser;
    if use_browser && browser_endpoint.is_none() {
        return Err(format!(
            "--backend browser requires --browser-endpoint (or {})",
            BROWSER_ENDPOINT_ENV
        ));
    }
    if cli.max_depth == 0 {
        return Err("--max-depth must be at least 1".to_owned());
    }

    Ok(Invocation::Run(CliConfig {
        query_path,
        output_path: cli.output,
        log_level: cli.log_level.into(),
        headless_display: cli.xvfb,
        format_override: cli.format.map(|f| match f {
            FormatArg::Json5 => QueryFormat::Json5,
            FormatArg::Yaml => QueryFormat::Yaml,
        }),
        use_browser,
        browser_endpoint,
        ensure_ascii: !cli.no_ensure_ascii,
        timeout: Duration::from_secs(cli.timeout),
        options: ExecutionOptions {
            max_follow_depth: cli.max_depth,
            ..ExecutionOptions::default()
        },
    }))
}

/// Executes a parsed run configuration end to end, reporting problems as
/// exit codes plus stderr diagnostics.
pub fn run(config: &CliConfig) -> i32 {
    let text = match std::fs::read_to_string(&config.query_path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read query file {}: {}", config.query_path.display(), e);
            return EXIT_QUERY;
        }
    };

    let format = config.format_override.unwrap_or_else(|| {
        detect_format(&config.query_path.to_string_lossy(), &text)
    });
    let query = match parse_query(&text, format) {
        Ok(query) => query,
        Err(e) => {
            eprintln!("error: {}", e);
            return EXIT_QUERY;
        }
    };
    let violations = validate(&query);
    if !violations.is_empty() {
        eprintln!("error: query is invalid:");
        for v in &violations {
            eprintln!("  {}", v);
        }
        return EXIT_QUERY;
    }

    let mut backend: Box<dyn FetchBackend> = if config.use_browser {
        let endpoint = config
            .browser_endpoint
            .as_deref()
            .expect("parse_args enforces the endpoint");
        Box::new(BrowserBackend::new(
            endpoint,
            config.headless_display,
            config.timeout,
        ))
    } else {
        if config.headless_display {
            info!("--xvfb has no effect with the static backend; ignoring");
        }
        Box::new(HttpBackend::with_options(
            config.timeout,
            Duration::from_secs(10),
            5,
        ))
    };

    let records = match execute(&query, backend.as_mut(), &config.options) {
        Ok(records) => records,
        Err(e @ ExecError::RootNavigation(_)) => {
            eprintln!("error: {}", e);
            return EXIT_NAVIGATION;
        }
        Err(e @ (ExecError::InvalidQuery(_) | ExecError::Xpath(_))) => {
            eprintln!("error: {}", e);
            return EXIT_QUERY;
        }
        Err(e) => {
            eprintln!("error: {}", e);
            return EXIT_NAVIGATION;
        }
    };
    let _ = backend.close();
    info!("extracted {} record(s)", records.len());

    match write_output(&records, config.output_path.as_deref(), config.ensure_ascii) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: cannot write output: {}", e);
            EXIT_OUTPUT
        }
    }
}

/// Serializes records as pretty-printed JSON (2-space indent, trailing
/// newline) to `path`, or stdout when `path` is `None`. With `ensure_ascii`,
/// non-ASCII characters are `\uXXXX`-escaped.
pub fn write_output(
    records: &[RecordValue],
    path: Option<&Path>,
    ensure_ascii: bool,
) -> std::io::Result<()> {
    let text = records_to_json(records, ensure_ascii);
    match path {
        Some(path) => std::fs::write(path, text),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
        }
    }
}

fn run_bench(config: &BenchmarkConfig) -> i32 {
    let outcome = match run_benchmark(config) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {}", e);
            return 1;
        }
    };
    for failure in &outcome.failures {
        eprintln!("error: tier {} aborted: {}", failure.tier, failure.message);
    }
    if outcome.records.is_empty() {
        eprintln!("error: no benchmark records produced");
        return 1;
    }

    let summary = match summarize(&outcome.records) {
        Ok(summary) => summary,
        Err(e) => {
            eprintln!("error: {}", e);
            return 1;
        }
    };
    let out = config
        .output_path
        .clone()
        .unwrap_or_else(|| PathBuf::from("benchmark.csv"));
    match emit(&outcome.records, &summary, &out) {
        Ok(summary_path) => {
            println!("wrote {} records to {}", outcome.records.len(), out.display());
            println!("wrote summary to {}", summary_path.display());
            for tier in &summary.tiers {
                println!(
                    "{}: wall {:.2} ms (std {:.2}), cpu {:.2} ms, peak mem {:.0} bytes over {} runs",
                    tier.tier,
                    tier.wall_time_ms.mean,
                    tier.wall_time_ms.std,
                    tier.cpu_time_ms.mean,
                    tier.peak_memory_bytes.mean,
                    tier.runs
                );
            }
        }
        Err(e) => {
            eprintln!("error: cannot emit benchmark output: {}", e);
            return EXIT_OUTPUT;
        }
    }
    if outcome.failures.is_empty() {
        EXIT_OK
    } else {
        1
    }
}

/// Full CLI entry: parse argv, set up logging, dispatch.
pub fn main_entry<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Ok(Invocation::Exit(code)) => code,
        Ok(Invocation::Run(config)) => {
            init_logging(config.log_level);
            run(&config)
        }
        Ok(Invocation::Bench { config, log_level }) => {
            init_logging(log_level);
            run_bench(&config)
        }
        Err(message) => {
            eprintln!("{}", message.trim_end());
            EXIT_USAGE
        }
    }
}

fn init_logging(level: LevelFilter) {
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .try_init();
}
