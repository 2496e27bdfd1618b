//! Batch driver for the simulation harness: load a TOML experiment
//! config, apply flag overrides, run one experiment, write one artifact
//! with the resolved config echoed inside it, and print a one-line
//! summary per test.
//!
//! Exit codes: 0 on success, 2 when a requested test is not in the
//! registry (the error message lists what is), 1 for everything else.

mod config;

use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use metameans::harness::{self, Frequency, NamedCalibration, Report, RiskEstimate};
use metameans::metatest::ThresholdMap;
use metameans::model::Scenario;
use metameans::rng::RandomStream;
use metameans::{quantize, Error};
use serde::Serialize;

use crate::config::ExperimentConfig;

#[derive(Parser)]
#[command(
    name = "metameans",
    version,
    about = "Monte Carlo experiments for combined hypothesis tests in the \
             many normal means model"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Empirical ROC curves for the configured tests.
    Roc(RunArgs),
    /// Type I/II error rates and their sum at fixed levels.
    Risk(RunArgs),
    /// Power across a (d, m) grid at signal strengths ρ² = c·rate(d, m, n).
    Rates(RunArgs),
    /// Monte Carlo threshold tables for tests without analytic thresholds.
    Calibrate(RunArgs),
    /// Bit-budget audit of the binary-expansion quantizer.
    Quantize(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: std::path::PathBuf,
    /// Override the config's root seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's replication count.
    #[arg(long)]
    reps: Option<u64>,
    /// Override the config's output path.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Override the config's output format: csv, json, or svg.
    #[arg(long)]
    format: Option<String>,
    /// Comma-separated test names, replacing the config's list.
    #[arg(long, value_delimiter = ',')]
    tests: Option<Vec<String>>,
}

impl RunArgs {
    fn resolve(&self) -> anyhow::Result<ExperimentConfig> {
        let mut config = ExperimentConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            config.seed = Some(seed);
        }
        if let Some(reps) = self.reps {
            config.reps = reps;
        }
        if let Some(out) = &self.out {
            config.out = Some(out.clone());
        }
        if let Some(format) = &self.format {
            config.format = format.clone();
        }
        if let Some(tests) = &self.tests {
            config.tests = tests.clone();
        }
        Ok(config)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let unknown_test = err.chain().any(|cause| {
                matches!(
                    cause.downcast_ref::<Error>(),
                    Some(Error::UnknownTest { .. })
                )
            });
            ExitCode::from(if unknown_test { 2 } else { 1 })
        }
    }
}

fn run(command: Cmd) -> anyhow::Result<()> {
    match command {
        Cmd::Roc(args) => run_roc(args.resolve()?),
        Cmd::Risk(args) => run_risk(args.resolve()?),
        Cmd::Rates(args) => run_rates(args.resolve()?),
        Cmd::Calibrate(args) => run_calibrate(args.resolve()?),
        Cmd::Quantize(args) => run_quantize(args.resolve()?),
    }
}

fn emit_report<R: Report>(report: &R, config: &ExperimentConfig) -> anyhow::Result<()> {
    let format = config.format()?;
    let out = config.out()?;
    harness::emit(report, format, out, &config.echo_json()?)
        .with_context(|| format!("writing {}", out.display()))?;
    println!("wrote {}", out.display());
    Ok(())
}

/// Prepare every configured test, splitting off the ones this scenario
/// cannot run (directional statistics need m ≥ d) instead of failing.
fn prepare_all(
    config: &ExperimentConfig,
    scenario: &Scenario,
    alphas: &[f64],
    base: &RandomStream,
) -> anyhow::Result<(Vec<metameans::metatest::MetaTest>, Vec<String>)> {
    let mut tests = Vec::new();
    let mut unsupported = Vec::new();
    for spec in config.specs()? {
        match harness::prepare_test(&spec, scenario, alphas, config.calibration.reps(), base) {
            Ok(test) => tests.push(test),
            Err(Error::UnsupportedRegime(why)) => {
                log::warn!("{}: {why}; recording it as never rejecting", spec.name());
                unsupported.push(spec.name());
            }
            Err(err) => return Err(err).with_context(|| format!("preparing {}", spec.name())),
        }
    }
    Ok((tests, unsupported))
}

fn run_roc(config: ExperimentConfig) -> anyhow::Result<()> {
    let seed = config.seed()?;
    let scenario = config.scenario()?;
    let alphas = config.alphas(&harness::default_alpha_grid())?;
    let base = RandomStream::from_seed(seed);
    let (tests, unsupported) = prepare_all(&config, &scenario, &alphas, &base)?;

    let mut curves = harness::roc_curves(&tests, &scenario, &alphas, config.reps, &base.derive("eval"))?;
    for name in &unsupported {
        curves.push(harness::never_reject_curve(name, &scenario, &alphas, config.reps, seed));
    }
    for curve in &curves {
        println!(
            "{}: {} levels, tpr {:.4} at fpr 0.10 ({} reps, seed {})",
            curve.test,
            curve.points.len(),
            curve.tpr_at_fpr(0.1),
            curve.reps,
            curve.seed
        );
    }
    emit_report(&curves, &config)
}

fn run_risk(config: ExperimentConfig) -> anyhow::Result<()> {
    let seed = config.seed()?;
    let scenario = config.scenario()?;
    let alphas = config.alphas(&[0.05])?;
    let base = RandomStream::from_seed(seed);
    let (tests, unsupported) = prepare_all(&config, &scenario, &alphas, &base)?;

    let mut estimates = Vec::new();
    for test in &tests {
        for &alpha in &alphas {
            let stream = base.derive(&format!("risk:{}:{alpha}", test.name()));
            let est = harness::estimate_risk(test, &scenario, alpha, config.reps, &stream)?;
            println!(
                "{}: alpha {:.3}, type I {:.4}±{:.4}, type II {:.4}±{:.4}, risk {:.4}",
                est.test, est.alpha, est.type1.rate, est.type1.band, est.type2.rate,
                est.type2.band, est.risk()
            );
            estimates.push(est);
        }
    }
    for name in &unsupported {
        for &alpha in &alphas {
            println!("{name}: alpha {alpha:.3}, never rejects here (type II = 1)");
            estimates.push(RiskEstimate {
                test: name.clone(),
                scenario: scenario.clone(),
                alpha,
                type1: Frequency { rate: 0.0, band: 0.0 },
                type2: Frequency { rate: 1.0, band: 0.0 },
                reps: config.reps,
                seed,
            });
        }
    }
    emit_report(&estimates, &config)
}

fn run_rates(config: ExperimentConfig) -> anyhow::Result<()> {
    let seed = config.seed()?;
    let rates = config
        .rates
        .as_ref()
        .context("the rates subcommand needs a [rates] table")?;
    let specs = config.specs()?;
    let sweep = harness::rate_sweep(
        &specs,
        &rates.grid()?,
        &rates.c,
        rates.formula()?,
        rates.alpha,
        config.reps,
        config.calibration.reps(),
        &RandomStream::from_seed(seed),
    )?;

    for spec in &specs {
        let powers: Vec<f64> = sweep
            .cells
            .iter()
            .filter(|cell| cell.test == spec.name())
            .map(|cell| cell.power)
            .collect();
        let (lo, hi) = powers
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| {
                (lo.min(p), hi.max(p))
            });
        println!(
            "{}: power {:.4}..{:.4} over {} cells at alpha {:.3} (rate {})",
            spec.name(),
            lo,
            hi,
            powers.len(),
            sweep.alpha,
            sweep.rate
        );
    }
    for entry in &sweep.elbow {
        println!(
            "elbow d={} m={} c={}: chisq tpr {:.4}, directional tpr {:.4}, gap {:+.4}",
            entry.d, entry.m, entry.c, entry.chisq_tpr, entry.directional_tpr, entry.gap
        );
    }
    emit_report(&sweep, &config)
}

fn run_calibrate(config: ExperimentConfig) -> anyhow::Result<()> {
    let seed = config.seed()?;
    let scenario = config.scenario()?;
    let alphas = config.alphas(&harness::default_alpha_grid())?;
    let base = RandomStream::from_seed(seed);

    let mut tables = Vec::new();
    for spec in config.specs()? {
        match harness::prepare_test(&spec, &scenario, &alphas, config.calibration.reps(), &base) {
            Ok(test) => match test.threshold_map() {
                ThresholdMap::Calibrated(table) => {
                    println!(
                        "{}: {} thresholds from {} null replications (fingerprint {:#18x})",
                        test.name(),
                        table.kappas.len(),
                        table.reps,
                        table.seed_fingerprint
                    );
                    tables.push(NamedCalibration {
                        test: spec.name(),
                        scenario: scenario.clone(),
                        table: table.clone(),
                    });
                }
                _ => println!("{}: analytic thresholds, nothing to calibrate", spec.name()),
            },
            Err(Error::UnsupportedRegime(why)) => {
                println!("{}: skipped ({why})", spec.name());
            }
            Err(err) => return Err(err).with_context(|| format!("calibrating {}", spec.name())),
        }
    }
    if tables.is_empty() {
        log::warn!("no configured test needs calibration in this scenario");
    }
    emit_report(&tables, &config)
}

#[derive(Serialize)]
struct QuantizeRow {
    eps: f64,
    inputs: u64,
    mean_bits: f64,
    max_bits: u32,
    max_error: f64,
    /// Mean of the per-input budget ceiling max(log₂|x|, 0) + log₂(1/ε) + 3.
    mean_bound: f64,
}

/// Empirical bit budgets of the quantizer against its accuracy bound.
#[derive(Serialize)]
struct QuantizeReport {
    law: String,
    scale: f64,
    seed: u64,
    rows: Vec<QuantizeRow>,
}

impl Report for QuantizeReport {
    fn csv_header(&self) -> &'static str {
        "eps,inputs,mean_bits,max_bits,max_error,mean_bound,law,scale,seed"
    }

    fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{},{},{},{}",
                    r.eps,
                    r.inputs,
                    r.mean_bits,
                    r.max_bits,
                    r.max_error,
                    r.mean_bound,
                    self.law,
                    self.scale,
                    self.seed
                )
            })
            .collect()
    }
}

fn run_quantize(config: ExperimentConfig) -> anyhow::Result<()> {
    let seed = config.seed()?;
    let qc = config.quantize.clone().unwrap_or_default();
    if qc.inputs == 0 {
        anyhow::bail!("[quantize] inputs must be positive");
    }
    if !matches!(qc.law.as_str(), "normal" | "exponential") {
        anyhow::bail!("unknown input law `{}` (expected normal or exponential)", qc.law);
    }
    if qc.eps.iter().any(|&eps| !(eps > 0.0 && eps < 1.0)) {
        anyhow::bail!("[quantize] every eps must lie in (0, 1)");
    }

    let mut rows = Vec::new();
    for &eps in &qc.eps {
        let mut stream =
            RandomStream::from_seed(seed).derive(&format!("quantize:{}:eps:{eps}", qc.law));
        let mut total_bits = 0u64;
        let mut max_bits = 0u32;
        let mut max_error = 0.0f64;
        let mut bound_sum = 0.0;
        for _ in 0..qc.inputs {
            let x = match qc.law.as_str() {
                "normal" => qc.scale * stream.next_gaussian(),
                _ => -qc.scale * (1.0 - stream.next_f64()).ln(),
            };
            let bits = quantize::bits_for_accuracy(x, eps);
            let approx = quantize::binary_expand(x, bits)
                .expect("bits_for_accuracy returns a sufficient budget");
            total_bits += u64::from(bits);
            max_bits = max_bits.max(bits);
            max_error = max_error.max((x - approx.value).abs());
            bound_sum += x.abs().log2().max(0.0) + (1.0 / eps).log2() + 3.0;
        }
        if max_error > eps {
            anyhow::bail!(
                "quantizer exceeded its accuracy target: error {max_error} > eps {eps}"
            );
        }
        let row = QuantizeRow {
            eps,
            inputs: qc.inputs,
            mean_bits: total_bits as f64 / qc.inputs as f64,
            max_bits,
            max_error,
            mean_bound: bound_sum / qc.inputs as f64,
        };
        println!(
            "eps {:.0e}: mean bits {:.3} (budget ceiling {:.3}), max error {:.3e} over {} inputs",
            row.eps, row.mean_bits, row.mean_bound, row.max_error, row.inputs
        );
        rows.push(row);
    }
    let report = QuantizeReport {
        law: qc.law.clone(),
        scale: qc.scale,
        seed,
        rows,
    };
    emit_report(&report, &config)
}
