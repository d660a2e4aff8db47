//! Experiment configuration: problem/algorithm selection, run shape, seeds,
//! and output location. Configs load from TOML; every field has a preset
//! default, so partial files are valid.

use anyhow::{bail, Context, Result};
use moea_core::problems::DelayAggregation;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};

/// Objective function under optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    /// UAV data-collection power allocation (delay vs energy).
    Mcs,
    /// Analytic validation problem with a convex front.
    Zdt1,
    /// Analytic validation problem with a concave front.
    Zdt2,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::Mcs => "mcs",
            ProblemKind::Zdt1 => "zdt1",
            ProblemKind::Zdt2 => "zdt2",
        })
    }
}

/// Optimizer driving the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmKind {
    /// Attention-guided optimizer with conventional exploration offspring.
    Attention,
    /// Competitive-swarm baseline.
    Lmocso,
}

impl AlgorithmKind {
    /// The opposing side of a head-to-head comparison.
    pub fn other(self) -> Self {
        match self {
            AlgorithmKind::Attention => AlgorithmKind::Lmocso,
            AlgorithmKind::Lmocso => AlgorithmKind::Attention,
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgorithmKind::Attention => "attention",
            AlgorithmKind::Lmocso => "lmocso",
        })
    }
}

/// Delay-objective aggregation for the mcs problem (config-file mirror of
/// [`DelayAggregation`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DelayMode {
    #[default]
    Sum,
    Max,
}

impl From<DelayMode> for DelayAggregation {
    fn from(mode: DelayMode) -> Self {
        match mode {
            DelayMode::Sum => DelayAggregation::Sum,
            DelayMode::Max => DelayAggregation::Max,
        }
    }
}

/// Full description of a seeded experiment. The default value is the `fig4`
/// preset: the full-scale head-to-head setup (mcs, n=300, d=100, k=5, g=10,
/// 50,000 FE, seeds 1..=10).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemKind,
    pub algorithm: AlgorithmKind,
    /// Decision-space dimension (sensor count for mcs, variable count for zdt).
    pub n: usize,
    /// Population size, which is also the offspring count per generation.
    pub d: usize,
    /// Number of variable groups in the attention key matrix.
    pub k: usize,
    /// Attention-generated offspring per generation (the rest are conventional).
    pub g: usize,
    /// Total objective-evaluation budget per run.
    pub fe_budget: u64,
    /// One independent optimizer run per seed.
    pub seeds: Vec<u64>,
    /// Generations between indicator samples in the trace.
    pub trace_every: usize,
    /// Directory receiving trace/front/manifest files.
    pub out_dir: PathBuf,
    /// Layout seed for the mcs sensor field (distinct from run seeds).
    pub instance_seed: u64,
    /// Scalarization weights when building the mcs reference front.
    pub reference_weights: usize,
    /// Sample count when building an analytic zdt reference front.
    pub reference_points: usize,
    /// Delay aggregation for the mcs problem.
    pub delay_mode: DelayMode,
    /// Accumulate fronts across generations before computing indicators
    /// (makes HV non-decreasing along the trace).
    pub archive: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::fig4()
    }
}

impl ExperimentConfig {
    /// The full-scale head-to-head preset: mcs with 300 sensors, population
    /// 100, key groups 5, 10 attention offspring per generation, 50,000
    /// evaluations, seeds 1..=10.
    pub fn fig4() -> Self {
        Self {
            problem: ProblemKind::Mcs,
            algorithm: AlgorithmKind::Attention,
            n: 300,
            d: 100,
            k: 5,
            g: 10,
            fe_budget: 50_000,
            seeds: (1..=10).collect(),
            trace_every: 10,
            out_dir: PathBuf::from("out"),
            instance_seed: 1,
            reference_weights: 200,
            reference_points: 500,
            delay_mode: DelayMode::Sum,
            archive: false,
        }
    }

    /// Looks up a named preset.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "fig4" => Ok(Self::fig4()),
            other => bail!("unknown preset '{other}' (available: fig4)"),
        }
    }

    /// Parses a TOML config file; missing keys fall back to the `fig4`
    /// preset values.
    pub fn from_toml_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let config: Self = toml::from_str(&text)
            .with_context(|| format!("cannot parse config file {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    /// Checks the structural invariants, naming the offending field.
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("n", self.n),
            ("d", self.d),
            ("k", self.k),
            ("g", self.g),
            ("trace_every", self.trace_every),
        ];
        for (name, v) in counts {
            if v == 0 {
                bail!("config field '{name}' must be positive, got 0");
            }
        }
        if self.fe_budget == 0 {
            bail!("config field 'fe_budget' must be positive, got 0");
        }
        if self.k > self.n {
            bail!(
                "config field 'k' ({}) must not exceed the dimension 'n' ({})",
                self.k,
                self.n
            );
        }
        if self.g > self.d {
            bail!(
                "config field 'g' ({}) must not exceed the population size 'd' ({})",
                self.g,
                self.d
            );
        }
        if self.seeds.is_empty() {
            bail!("config field 'seeds' must not be empty");
        }
        if self.fe_budget < self.d as u64 {
            bail!(
                "config field 'fe_budget' ({}) must cover at least one population of size 'd' ({})",
                self.fe_budget,
                self.d
            );
        }
        if self.reference_weights < 2 {
            bail!(
                "config field 'reference_weights' must be at least 2, got {}",
                self.reference_weights
            );
        }
        if self.reference_points < 2 {
            bail!(
                "config field 'reference_points' must be at least 2, got {}",
                self.reference_points
            );
        }
        Ok(())
    }

    /// File-name stem for one run: `<algorithm>_<problem>_s<seed>`.
    pub fn run_stem(&self, seed: u64) -> String {
        format!("{}_{}_s{seed}", self.algorithm, self.problem)
    }
}
