//! Seeded run execution: problem preparation (with cached reference fronts),
//! per-seed optimizer runs, and persistence of trace CSV, front CSV, and a
//! JSON manifest per run.

use crate::config::{AlgorithmKind, ExperimentConfig, ProblemKind};
use anyhow::{bail, Context, Result};
use moea_core::evo::Individual;
use moea_core::metrics::NormalizationContext;
use moea_core::problems::{
    mcs_reference_front, zdt_front, McsConfig, McsInstance, Problem, ZdtProblem, ZdtVariant,
};
use moea_core::{run_attention_moea, run_lmocso, AttentionParams, RunTrace, TraceRecorder};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// A problem instance plus the reference front used for indicator
/// normalization, shared across the seeds of one experiment.
pub struct PreparedProblem {
    pub problem: Box<dyn Problem>,
    pub reference: Vec<Vec<f64>>,
    /// Content hash of the mcs instance and front parameters (None for zdt).
    pub instance_hash: Option<String>,
}

/// Everything persisted about a single seeded run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub wall_time_s: f64,
    pub normalization: Normalization,
    pub code_version: String,
    pub instance_hash: Option<String>,
    pub final_fe: u64,
    pub final_hv: f64,
    pub final_igd: f64,
}

/// Serializable mirror of the indicator normalization context.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Normalization {
    pub ideal: [f64; 2],
    pub nadir: [f64; 2],
    pub ref_point: [f64; 2],
}

impl From<&NormalizationContext> for Normalization {
    fn from(ctx: &NormalizationContext) -> Self {
        Self {
            ideal: ctx.ideal,
            nadir: ctx.nadir,
            ref_point: ctx.ref_point,
        }
    }
}

/// Output paths and the final indicator values of one run.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub seed: u64,
    pub trace_path: PathBuf,
    pub front_path: PathBuf,
    pub manifest_path: PathBuf,
    pub final_fe: u64,
    pub final_hv: f64,
    pub final_igd: f64,
}

/// Builds the configured problem and its reference front. The mcs reference
/// front is an oracle sweep that is independent of run seeds, so it is cached
/// under `out_dir` keyed by a content hash; a matching cache file is loaded
/// instead of recomputed.
pub fn prepare_problem(config: &ExperimentConfig) -> Result<PreparedProblem> {
    match config.problem {
        ProblemKind::Zdt1 | ProblemKind::Zdt2 => {
            let variant = match config.problem {
                ProblemKind::Zdt1 => ZdtVariant::Zdt1,
                _ => ZdtVariant::Zdt2,
            };
            let problem = ZdtProblem::new(variant, config.n)?;
            let reference = zdt_front(variant, config.reference_points)?;
            Ok(PreparedProblem {
                problem: Box::new(problem),
                reference,
                instance_hash: None,
            })
        }
        ProblemKind::Mcs => {
            let instance = build_mcs_instance(config)?;
            let hash = mcs_instance_hash(&instance, config.reference_weights);
            let cache_path = reference_cache_path(&config.out_dir, &hash);
            let reference = if cache_path.exists() {
                read_objective_csv(&cache_path)?
            } else {
                let front = mcs_reference_front(&instance, config.reference_weights)?;
                std::fs::create_dir_all(&config.out_dir).with_context(|| {
                    format!("cannot create output directory {}", config.out_dir.display())
                })?;
                write_objective_csv(&cache_path, "delay_s,energy_j", &front)?;
                front
            };
            Ok(PreparedProblem {
                problem: Box::new(instance),
                reference,
                instance_hash: Some(hash),
            })
        }
    }
}

/// Deterministically generates the mcs sensor layout from the instance seed.
pub fn build_mcs_instance(config: &ExperimentConfig) -> Result<McsInstance> {
    let mcs_config = McsConfig {
        n: config.n,
        delay_aggregation: config.delay_mode.into(),
        ..McsConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.instance_seed);
    Ok(McsInstance::generate(mcs_config, &mut rng)?)
}

/// Location of the cached mcs reference front for a given instance hash.
pub fn reference_cache_path(out_dir: &Path, instance_hash: &str) -> PathBuf {
    out_dir.join(format!("reference_front_mcs_{instance_hash}.csv"))
}

/// Content hash over everything that determines the mcs reference front:
/// channel gains, link parameters, power bounds, and the weight count.
pub fn mcs_instance_hash(instance: &McsInstance, reference_weights: usize) -> String {
    let mut hasher = Sha256::new();
    let config = instance.config();
    for &gain in instance.gains() {
        hasher.update(gain.to_le_bytes());
    }
    for value in [
        config.data_bits,
        config.bandwidth_hz,
        config.noise_w,
        config.p_lo,
        config.p_hi,
    ] {
        hasher.update(value.to_le_bytes());
    }
    hasher.update([matches!(config.delay_aggregation, moea_core::problems::DelayAggregation::Max) as u8]);
    hasher.update((reference_weights as u64).to_le_bytes());
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(16);
    for byte in &digest[..8] {
        let _ = write!(hex, "{byte:02x}");
    }
    hex
}

/// Runs every configured seed and writes the three files per run.
pub fn execute_runs(config: &ExperimentConfig) -> Result<Vec<RunArtifacts>> {
    config.validate()?;
    let prepared = prepare_problem(config)?;
    std::fs::create_dir_all(&config.out_dir)
        .with_context(|| format!("cannot create output directory {}", config.out_dir.display()))?;
    config
        .seeds
        .iter()
        .map(|&seed| execute_seed(config, &prepared, seed))
        .collect()
}

/// Runs one seed of the configured experiment and persists its artifacts.
pub fn execute_seed(
    config: &ExperimentConfig,
    prepared: &PreparedProblem,
    seed: u64,
) -> Result<RunArtifacts> {
    let recorder = TraceRecorder::new(
        prepared.reference.clone(),
        config.trace_every,
        config.archive,
    )?;
    let normalization = Normalization::from(recorder.context());
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (front, trace): (Vec<Individual>, RunTrace) = match config.algorithm {
        AlgorithmKind::Attention => {
            let params = AttentionParams::new(config.k, config.g, config.d, config.fe_budget);
            run_attention_moea(prepared.problem.as_ref(), &params, recorder, &mut rng)?
        }
        AlgorithmKind::Lmocso => run_lmocso(
            prepared.problem.as_ref(),
            config.d,
            config.fe_budget,
            recorder,
            &mut rng,
        )?,
    };
    let wall_time_s = started.elapsed().as_secs_f64();

    let last = trace
        .rows
        .last()
        .context("run produced an empty trace")?
        .clone();
    let stem = config.run_stem(seed);
    let trace_path = config.out_dir.join(format!("{stem}_trace.csv"));
    let front_path = config.out_dir.join(format!("{stem}_front.csv"));
    let manifest_path = config.out_dir.join(format!("{stem}_manifest.json"));

    write_trace_csv(&trace_path, &trace)?;
    write_front_csv(&front_path, &front)?;
    let manifest = RunManifest {
        config: config.clone(),
        seed,
        wall_time_s,
        normalization,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        instance_hash: prepared.instance_hash.clone(),
        final_fe: last.fe,
        final_hv: last.hv,
        final_igd: last.igd,
    };
    let json = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(&manifest_path, json)
        .with_context(|| format!("cannot write {}", manifest_path.display()))?;

    Ok(RunArtifacts {
        seed,
        trace_path,
        front_path,
        manifest_path,
        final_fe: last.fe,
        final_hv: last.hv,
        final_igd: last.igd,
    })
}

/// Loads a manifest written by [`execute_seed`].
pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read manifest {}", path.display()))?;
    Ok(serde_json::from_str(&text)
        .with_context(|| format!("cannot parse manifest {}", path.display()))?)
}

fn write_trace_csv(path: &Path, trace: &RunTrace) -> Result<()> {
    let mut text = String::from("generation,fe,hv,igd\n");
    for row in &trace.rows {
        let _ = writeln!(text, "{},{},{},{}", row.generation, row.fe, row.hv, row.igd);
    }
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn write_front_csv(path: &Path, front: &[Individual]) -> Result<()> {
    let dim = front.first().map_or(0, |ind| ind.x.len());
    let mut text = String::from("f1,f2");
    for i in 1..=dim {
        let _ = write!(text, ",x{i}");
    }
    text.push('\n');
    for ind in front {
        let f = ind.objectives();
        let _ = write!(text, "{},{}", f[0], f[1]);
        for v in &ind.x {
            let _ = write!(text, ",{v}");
        }
        text.push('\n');
    }
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Writes a two-column objective CSV (used for reference fronts).
pub fn write_objective_csv(path: &Path, header: &str, points: &[Vec<f64>]) -> Result<()> {
    let mut text = String::from(header);
    text.push('\n');
    for point in points {
        let _ = writeln!(text, "{},{}", point[0], point[1]);
    }
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Reads a two-column objective CSV written by [`write_objective_csv`].
/// Rust prints floats in shortest round-trip form, so the cycle is lossless.
pub fn read_objective_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut points = Vec::new();
    for (idx, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let parse = |field: Option<&str>| -> Result<f64> {
            field
                .with_context(|| format!("{}:{}: missing column", path.display(), idx + 1))?
                .trim()
                .parse::<f64>()
                .with_context(|| format!("{}:{}: bad float", path.display(), idx + 1))
        };
        let a = parse(fields.next())?;
        let b = parse(fields.next())?;
        points.push(vec![a, b]);
    }
    if points.is_empty() {
        bail!("{}: no data rows", path.display());
    }
    Ok(points)
}
