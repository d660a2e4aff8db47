//! Head-to-head comparison of two algorithm configurations over a shared
//! seed set: per-seed final indicators, medians, win counts, and an ordering
//! verdict (A's median HV at least B's, A's median IGD at most B's).

use crate::config::ExperimentConfig;
use crate::runner::{execute_runs, read_manifest, RunArtifacts};
use anyhow::{bail, Context, Result};
use std::fmt::Write as _;
use std::path::PathBuf;

/// Final indicator pair of one seeded run under both algorithms.
#[derive(Debug, Clone, Copy)]
pub struct SeedOutcome {
    pub seed: u64,
    pub hv_a: f64,
    pub igd_a: f64,
    pub hv_b: f64,
    pub igd_b: f64,
}

/// Everything the comparison produced, including the written report path.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub label_a: String,
    pub label_b: String,
    pub rows: Vec<SeedOutcome>,
    pub median_hv_a: f64,
    pub median_igd_a: f64,
    pub median_hv_b: f64,
    pub median_igd_b: f64,
    /// Seeds where A's final HV is strictly larger / strictly smaller than B's.
    pub hv_wins_a: usize,
    pub hv_wins_b: usize,
    /// Seeds where A's final IGD is strictly smaller / strictly larger than B's.
    pub igd_wins_a: usize,
    pub igd_wins_b: usize,
    /// True iff median HV(A) >= median HV(B) and median IGD(A) <= median IGD(B).
    pub verdict: bool,
    pub report_path: PathBuf,
}

/// Median of a non-empty slice (mean of the two middles for even length).
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("median input must not be NaN"));
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    }
}

/// Checks that two configs describe the same experiment apart from the
/// algorithm (and output directory).
fn check_shared(config_a: &ExperimentConfig, config_b: &ExperimentConfig) -> Result<()> {
    let mut a = config_a.clone();
    let b = config_b.clone();
    a.algorithm = b.algorithm;
    a.out_dir = b.out_dir.clone();
    if a != b {
        bail!(
            "comparison configs must share problem, dimensions, seeds, and budget; \
             they differ beyond algorithm/out_dir"
        );
    }
    Ok(())
}

/// Returns run results for a config, reusing any run whose manifest in the
/// output directory already records an identical configuration and seed.
fn runs_with_cache(config: &ExperimentConfig) -> Result<Vec<RunArtifacts>> {
    let all_cached = config.seeds.iter().all(|&seed| {
        let stem = config.run_stem(seed);
        let manifest_path = config.out_dir.join(format!("{stem}_manifest.json"));
        match read_manifest(&manifest_path) {
            Ok(manifest) => manifest.config == *config && manifest.seed == seed,
            Err(_) => false,
        }
    });
    if all_cached {
        return config
            .seeds
            .iter()
            .map(|&seed| {
                let stem = config.run_stem(seed);
                let manifest_path = config.out_dir.join(format!("{stem}_manifest.json"));
                let manifest = read_manifest(&manifest_path)?;
                Ok(RunArtifacts {
                    seed,
                    trace_path: config.out_dir.join(format!("{stem}_trace.csv")),
                    front_path: config.out_dir.join(format!("{stem}_front.csv")),
                    manifest_path,
                    final_fe: manifest.final_fe,
                    final_hv: manifest.final_hv,
                    final_igd: manifest.final_igd,
                })
            })
            .collect();
    }
    execute_runs(config)
}

/// Runs (or loads) both configurations over the shared seeds and writes the
/// comparison CSV next to the run artifacts of `config_a`.
pub fn compare(config_a: &ExperimentConfig, config_b: &ExperimentConfig) -> Result<ComparisonReport> {
    config_a.validate()?;
    config_b.validate()?;
    check_shared(config_a, config_b)?;
    if config_a.algorithm == config_b.algorithm && config_a.out_dir == config_b.out_dir {
        // Same algorithm in the same directory would overwrite itself; allow
        // the degenerate self-comparison only through distinct directories.
        bail!("self-comparison needs distinct out_dir values to keep both run sets");
    }

    let runs_a = runs_with_cache(config_a)?;
    let runs_b = runs_with_cache(config_b)?;

    let rows: Vec<SeedOutcome> = runs_a
        .iter()
        .zip(&runs_b)
        .map(|(a, b)| SeedOutcome {
            seed: a.seed,
            hv_a: a.final_hv,
            igd_a: a.final_igd,
            hv_b: b.final_hv,
            igd_b: b.final_igd,
        })
        .collect();

    let median_hv_a = median(&rows.iter().map(|r| r.hv_a).collect::<Vec<_>>());
    let median_igd_a = median(&rows.iter().map(|r| r.igd_a).collect::<Vec<_>>());
    let median_hv_b = median(&rows.iter().map(|r| r.hv_b).collect::<Vec<_>>());
    let median_igd_b = median(&rows.iter().map(|r| r.igd_b).collect::<Vec<_>>());
    let hv_wins_a = rows.iter().filter(|r| r.hv_a > r.hv_b).count();
    let hv_wins_b = rows.iter().filter(|r| r.hv_b > r.hv_a).count();
    let igd_wins_a = rows.iter().filter(|r| r.igd_a < r.igd_b).count();
    let igd_wins_b = rows.iter().filter(|r| r.igd_b < r.igd_a).count();
    let verdict = median_hv_a >= median_hv_b && median_igd_a <= median_igd_b;

    let label_a = config_a.algorithm.to_string();
    let label_b = config_b.algorithm.to_string();
    let report_path = config_a.out_dir.join(format!(
        "compare_{label_a}_vs_{label_b}_{}.csv",
        config_a.problem
    ));
    let mut text = format!("seed,{label_a}_hv,{label_a}_igd,{label_b}_hv,{label_b}_igd\n");
    for row in &rows {
        let _ = writeln!(
            text,
            "{},{},{},{},{}",
            row.seed, row.hv_a, row.igd_a, row.hv_b, row.igd_b
        );
    }
    let _ = writeln!(
        text,
        "median,{median_hv_a},{median_igd_a},{median_hv_b},{median_igd_b}"
    );
    let _ = writeln!(text, "wins,{hv_wins_a},{igd_wins_a},{hv_wins_b},{igd_wins_b}");
    std::fs::create_dir_all(&config_a.out_dir)
        .with_context(|| format!("cannot create {}", config_a.out_dir.display()))?;
    std::fs::write(&report_path, text)
        .with_context(|| format!("cannot write {}", report_path.display()))?;

    Ok(ComparisonReport {
        label_a,
        label_b,
        rows,
        median_hv_a,
        median_igd_a,
        median_hv_b,
        median_igd_b,
        hv_wins_a,
        hv_wins_b,
        igd_wins_a,
        igd_wins_b,
        verdict,
        report_path,
    })
}
