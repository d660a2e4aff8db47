//! Benchmark harness around the optimizer library: TOML-configurable seeded
//! experiments, head-to-head algorithm comparison with a CSV report, numeric
//! oracle validation suites, and reference-front export.
//!
//! The CLI binary (`moea-bench`) wraps these modules; everything here is
//! callable as a library so integration tests can drive the same paths.

pub mod compare;
pub mod config;
pub mod runner;
pub mod validate;

pub use compare::{compare, ComparisonReport};
pub use config::{AlgorithmKind, DelayMode, ExperimentConfig, ProblemKind};
pub use runner::{execute_runs, execute_seed, prepare_problem, RunArtifacts, RunManifest};
pub use validate::{run_all, SuiteResult};
