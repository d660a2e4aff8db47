//! Multi-objective evolutionary optimization with attention-guided
//! dimensionality reduction.
//!
//! The crate provides two bi-objective optimizers sharing one set of
//! evolutionary primitives:
//!
//! - [`attention::run_attention_moea`] — each generation, decision variables
//!   are grouped by population variance and offspring are generated by
//!   evolving low-dimensional "query" ratios against an anchor solution,
//!   shrinking the variation problem from n dimensions to k.
//! - [`lmocso::run_lmocso`] — a competitive-swarm baseline where randomly
//!   paired particles compete and losers learn from winners through a
//!   two-phase velocity update.
//!
//! Both run on the [`problems`] suite (a UAV data-collection transmit-power
//! problem trading total delay against total energy, plus analytic
//! benchmark functions) and report exact 2-D hypervolume and inverted
//! generational distance through the [`metrics`] and [`trace`] modules.
//! Runs are deterministic: a seeded RNG fully determines every trajectory.

pub mod attention;
pub mod error;
pub mod evo;
pub mod lmocso;
pub mod metrics;
pub mod problems;
pub mod trace;

pub use attention::{run_attention_moea, AttentionParams};
pub use error::{Error, Result};
pub use lmocso::run_lmocso;
pub use trace::{RunTrace, TraceRecorder, TraceRow};
