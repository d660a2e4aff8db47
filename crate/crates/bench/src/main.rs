//! Command-line entry point: `run`, `compare`, `validate`, `front-oracle`.
//!
//! Exit codes: 0 success (and, for `compare`, ordering verdict holds);
//! 1 operational error; 2 `compare` ran but the verdict failed or `validate`
//! found a failing suite.

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use moea_bench::config::{AlgorithmKind, ExperimentConfig, ProblemKind};
use moea_bench::runner::{
    build_mcs_instance, mcs_instance_hash, reference_cache_path, write_objective_csv,
};
use moea_bench::{compare, execute_runs, run_all};
use moea_core::metrics::hv_2d;
use moea_core::problems::mcs_reference_front;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "moea-bench",
    version,
    about = "Benchmark harness for large-scale bi-objective optimizers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one optimizer run per seed, writing trace CSV, front CSV, and
    /// a JSON manifest for each.
    Run(ConfigArgs),
    /// Run both algorithms over the shared seeds and report per-seed finals,
    /// medians, and win counts; exit 2 unless the first algorithm's medians
    /// are at least as good on both indicators.
    Compare(CompareArgs),
    /// Execute the numeric oracle suites and print one pass/fail line each.
    Validate,
    /// Compute the scalarization reference front of the configured mcs
    /// instance and write it as CSV.
    FrontOracle(FrontOracleArgs),
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// TOML config file; missing keys fall back to the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named preset to start from (available: fig4).
    #[arg(long, default_value = "fig4")]
    preset: String,
    /// Replace the config's seed list (repeatable).
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    /// Replace the config's output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace the config's algorithm (attention | lmocso).
    #[arg(long)]
    algorithm: Option<String>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    base: ConfigArgs,
    /// Second config file; defaults to the first config with the other
    /// algorithm, writing into the same output directory.
    #[arg(long)]
    config_b: Option<PathBuf>,
}

#[derive(Args)]
struct FrontOracleArgs {
    #[command(flatten)]
    base: ConfigArgs,
    /// Output CSV path (default: the cache location under the config's
    /// output directory).
    #[arg(long)]
    file: Option<PathBuf>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::from_toml_path(path)?,
            None => ExperimentConfig::preset(&self.preset)?,
        };
        if !self.seeds.is_empty() {
            config.seeds = self.seeds.clone();
        }
        if let Some(out) = &self.out {
            config.out_dir = out.clone();
        }
        if let Some(algorithm) = &self.algorithm {
            config.algorithm = match algorithm.as_str() {
                "attention" => AlgorithmKind::Attention,
                "lmocso" => AlgorithmKind::Lmocso,
                other => bail!("unknown algorithm '{other}' (available: attention, lmocso)"),
            };
        }
        config.validate()?;
        Ok(config)
    }
}

fn cmd_run(args: &ConfigArgs) -> Result<ExitCode> {
    let config = args.resolve()?;
    let artifacts = execute_runs(&config)?;
    println!(
        "{} on {} | n={} d={} fe_budget={}",
        config.algorithm, config.problem, config.n, config.d, config.fe_budget
    );
    for run in &artifacts {
        println!(
            "seed {:>4}: fe {:>7}  hv {:.6}  igd {:.6}  -> {}",
            run.seed,
            run.final_fe,
            run.final_hv,
            run.final_igd,
            run.trace_path.display()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_compare(args: &CompareArgs) -> Result<ExitCode> {
    let config_a = args.base.resolve()?;
    let config_b = match &args.config_b {
        Some(path) => {
            let mut b = ExperimentConfig::from_toml_path(path)?;
            if let Some(out) = &args.base.out {
                b.out_dir = out.clone();
            }
            if !args.base.seeds.is_empty() {
                b.seeds = args.base.seeds.clone();
            }
            b
        }
        None => {
            // Default head-to-head: the resolved side versus the other
            // algorithm, same directory (run files are stem-disjoint).
            ExperimentConfig {
                algorithm: config_a.algorithm.other(),
                ..config_a.clone()
            }
        }
    };
    let report = compare(&config_a, &config_b)?;
    println!(
        "head-to-head on {} over {} seeds (report: {})",
        config_a.problem,
        report.rows.len(),
        report.report_path.display()
    );
    for row in &report.rows {
        println!(
            "seed {:>4}: {} hv {:.6} igd {:.6} | {} hv {:.6} igd {:.6}",
            row.seed, report.label_a, row.hv_a, row.igd_a, report.label_b, row.hv_b, row.igd_b
        );
    }
    println!(
        "medians: {} hv {:.6} igd {:.6} | {} hv {:.6} igd {:.6}",
        report.label_a,
        report.median_hv_a,
        report.median_igd_a,
        report.label_b,
        report.median_hv_b,
        report.median_igd_b
    );
    println!(
        "wins ({} vs {}): hv {}-{}, igd {}-{}",
        report.label_a,
        report.label_b,
        report.hv_wins_a,
        report.hv_wins_b,
        report.igd_wins_a,
        report.igd_wins_b
    );
    if report.verdict {
        println!(
            "verdict: {} medians are at least as good on both indicators",
            report.label_a
        );
        Ok(ExitCode::SUCCESS)
    } else {
        println!("verdict: ordering does not hold");
        Ok(ExitCode::from(2))
    }
}

fn cmd_validate() -> Result<ExitCode> {
    let results = run_all(hv_2d);
    let mut all_passed = true;
    for suite in &results {
        let status = if suite.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:<26} {}", suite.name, suite.detail);
        all_passed &= suite.passed;
    }
    if all_passed {
        println!("all {} suites passed", results.len());
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

fn cmd_front_oracle(args: &FrontOracleArgs) -> Result<ExitCode> {
    let config = args.base.resolve()?;
    if config.problem != ProblemKind::Mcs {
        bail!(
            "front-oracle applies to the mcs problem; '{}' has an analytic front",
            config.problem
        );
    }
    let instance = build_mcs_instance(&config)?;
    let front = mcs_reference_front(&instance, config.reference_weights)?;
    let hash = mcs_instance_hash(&instance, config.reference_weights);
    let path = match &args.file {
        Some(path) => path.clone(),
        None => reference_cache_path(&config.out_dir, &hash),
    };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    write_objective_csv(&path, "delay_s,energy_j", &front)?;
    println!(
        "{} points (instance {hash}, {} weights) -> {}",
        front.len(),
        config.reference_weights,
        path.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Validate => cmd_validate(),
        Command::FrontOracle(args) => cmd_front_oracle(args),
    };
    match outcome {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::FAILURE
        }
    }
}
