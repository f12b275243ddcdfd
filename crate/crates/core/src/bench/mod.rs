//! Benchmark harness: run the tiered workload queries repeatedly against a
//! local fixture site, sample wall time, CPU time, and peak memory per run,
//! and emit per-run CSV records plus aggregated JSON statistics.

mod metrics;

pub use metrics::{machine_descriptor, MachineDescriptor};

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use log::{info, warn};
use serde::Serialize;
use thiserror::Error;

use crate::backend::{
    generate_benchmark_site, serve_fixture, tier_query_json5, BenchmarkTier, HttpBackend,
};
use crate::executor::{execute, ExecutionOptions};
use crate::query::{parse_query, validate, QueryFormat};

#[derive(Debug, Clone)]
pub struct BenchmarkConfig {
    pub tiers: Vec<BenchmarkTier>,
    pub runs_per_query: u32,
    pub seed: u64,
    /// Runs before measurement starts, excluded from the records.
    pub warmup_runs: u32,
    pub output_path: Option<PathBuf>,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            tiers: BenchmarkTier::ALL.to_vec(),
            runs_per_query: 10,
            seed: 42,
            warmup_runs: 1,
            output_path: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchmarkRecord {
    pub tier: BenchmarkTier,
    pub run_index: u32,
    pub wall_time_ms: f64,
    pub cpu_time_ms: f64,
    pub peak_memory_bytes: u64,
    pub records_extracted: u64,
    /// Unix epoch milliseconds at the end of the run.
    pub timestamp: u64,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("benchmark setup failed: {0}")]
    Setup(String),
    #[error("no records to summarize")]
    EmptyInput,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One tier that aborted mid-measurement; records gathered before the
/// failure are retained.
#[derive(Debug, Clone)]
pub struct TierFailure {
    pub tier: BenchmarkTier,
    pub message: String,
}

#[derive(Debug, Default)]
pub struct BenchmarkOutcome {
    pub records: Vec<BenchmarkRecord>,
    pub failures: Vec<TierFailure>,
}

/// Runs each requested tier: generate the seeded site, serve it locally,
/// execute the tier's query `warmup + runs` times sequentially, and sample
/// metrics around each measured run. Tears everything down between tiers.
pub fn run_benchmark(config: &BenchmarkConfig) -> Result<BenchmarkOutcome, BenchError> {
    let mut outcome = BenchmarkOutcome::default();
    for &tier in &config.tiers {
        match run_tier(tier, config) {
            Ok(mut records) => outcome.records.append(&mut records),
            Err(TierRun { records, message }) => {
                warn!("tier {} aborted: {}", tier, message);
                outcome.records.extend(records);
                outcome.failures.push(TierFailure { tier, message });
            }
        }
    }
    Ok(outcome)
}

struct TierRun {
    records: Vec<BenchmarkRecord>,
    message: String,
}

fn run_tier(tier: BenchmarkTier, config: &BenchmarkConfig) -> Result<Vec<BenchmarkRecord>, TierRun> {
    let fail = |message: String| TierRun {
        records: Vec::new(),
        message,
    };

    let dir = tempfile::tempdir().map_err(|e| fail(format!("tempdir: {}", e)))?;
    let site = generate_benchmark_site(tier, config.seed, dir.path())
        .map_err(|e| fail(format!("site generation: {}", e)))?;
    let mut server = serve_fixture(&site).map_err(|e| fail(format!("fixture server: {}", e)))?;

    let query_text = tier_query_json5(tier, &server.base_url());
    let query = parse_query(&query_text, QueryFormat::Json5)
        .map_err(|e| fail(format!("tier query: {}", e)))?;
    let violations = validate(&query);
    if !violations.is_empty() {
        return Err(fail(format!("tier query invalid: {:?}", violations)));
    }

    let options = ExecutionOptions::default();
    info!("benchmark tier={} runs={} warmup={}", tier, config.runs_per_query, config.warmup_runs);

    for _ in 0..config.warmup_runs {
        let mut backend = HttpBackend::new();
        if let Err(e) = execute(&query, &mut backend, &options) {
            server.shutdown();
            return Err(fail(format!("warmup run: {}", e)));
        }
    }

    let mut records = Vec::with_capacity(config.runs_per_query as usize);
    for run_index in 0..config.runs_per_query {
        metrics::try_reset_peak_rss();
        let cpu_before = metrics::cpu_time();
        let started = Instant::now();

        let mut backend = HttpBackend::new();
        let extracted = match execute(&query, &mut backend, &options) {
            Ok(result) => result.len() as u64,
            Err(e) => {
                server.shutdown();
                return Err(TierRun {
                    records,
                    message: format!("run {}: {}", run_index, e),
                });
            }
        };

        let wall_time_ms = started.elapsed().as_secs_f64() * 1000.0;
        let cpu_time_ms = (metrics::cpu_time() - cpu_before).as_secs_f64() * 1000.0;
        let peak_memory_bytes = metrics::peak_rss_bytes();
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);

        records.push(BenchmarkRecord {
            tier,
            run_index,
            wall_time_ms,
            cpu_time_ms,
            peak_memory_bytes,
            records_extracted: extracted,
            timestamp,
        });
    }

    server.shutdown();
    Ok(records)
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricStats {
    pub mean: f64,
    /// Sample standard deviation (n-1); 0 when only one run exists.
    pub std: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TierSummary {
    pub tier: String,
    pub runs: u32,
    /// True when fewer than two runs exist, leaving std undefined
    /// (reported as 0).
    pub std_undefined: bool,
    pub wall_time_ms: MetricStats,
    pub cpu_time_ms: MetricStats,
    pub peak_memory_bytes: MetricStats,
    pub mean_records_extracted: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkSummary {
    pub machine: MachineDescriptor,
    pub tiers: Vec<TierSummary>,
}

/// Per tier, the arithmetic mean and sample standard deviation of each
/// metric, plus a host machine descriptor.
pub fn summarize(records: &[BenchmarkRecord]) -> Result<BenchmarkSummary, BenchError> {
    if records.is_empty() {
        return Err(BenchError::EmptyInput);
    }
    let mut tier_order: Vec<BenchmarkTier> = Vec::new();
    for r in records {
        if !tier_order.contains(&r.tier) {
            tier_order.push(r.tier);
        }
    }

    let tiers = tier_order
        .into_iter()
        .map(|tier| {
            let runs: Vec<&BenchmarkRecord> = records.iter().filter(|r| r.tier == tier).collect();
            let wall: Vec<f64> = runs.iter().map(|r| r.wall_time_ms).collect();
            let cpu: Vec<f64> = runs.iter().map(|r| r.cpu_time_ms).collect();
            let mem: Vec<f64> = runs.iter().map(|r| r.peak_memory_bytes as f64).collect();
            let extracted: Vec<f64> = runs.iter().map(|r| r.records_extracted as f64).collect();
            TierSummary {
                tier: tier.name().to_owned(),
                runs: runs.len() as u32,
                std_undefined: runs.len() < 2,
                wall_time_ms: stats(&wall),
                cpu_time_ms: stats(&cpu),
                peak_memory_bytes: stats(&mem),
                mean_records_extracted: mean(&extracted),
            }
        })
        .collect();

    Ok(BenchmarkSummary {
        machine: machine_descriptor(),
        tiers,
    })
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample (n-1) standard deviation; 0 for fewer than two values.
pub fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64;
    var.sqrt()
}

fn stats(values: &[f64]) -> MetricStats {
    MetricStats {
        mean: mean(values),
        std: sample_std(values),
    }
}

pub const CSV_HEADER: &str =
    "tier,run_index,wall_time_ms,cpu_time_ms,peak_memory_bytes,records_extracted,timestamp";

/// Writes records as CSV at `csv_path` and the summary as JSON beside it
/// (`<stem>.summary.json`). Returns the summary path. Both outputs are
/// deterministic functions of their inputs.
pub fn emit(
    records: &[BenchmarkRecord],
    summary: &BenchmarkSummary,
    csv_path: &Path,
) -> Result<PathBuf, BenchError> {
    let mut csv = String::new();
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for r in records {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.tier.name(),
            r.run_index,
            r.wall_time_ms,
            r.cpu_time_ms,
            r.peak_memory_bytes,
            r.records_extracted,
            r.timestamp
        ));
    }
    let mut file = std::fs::File::create(csv_path)?;
    file.write_all(csv.as_bytes())?;

    let summary_path = summary_path_for(csv_path);
    let json = serde_json::to_string_pretty(summary)
        .map_err(|e| BenchError::Setup(format!("summary serialization: {}", e)))?;
    std::fs::write(&summary_path, json + "\n")?;
    Ok(summary_path)
}

pub fn summary_path_for(csv_path: &Path) -> PathBuf {
    let stem = csv_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "benchmark".to_owned());
    csv_path.with_file_name(format!("{}.summary.json", stem))
}
