//! Objective-function suite: the UAV data-collection energy/delay problem and
//! analytic validation problems with known Pareto fronts.

mod mcs;
mod zdt;

pub use mcs::{mcs_reference_front, DelayAggregation, McsConfig, McsInstance};
pub use zdt::{zdt_front, ZdtProblem, ZdtVariant};

use crate::error::Result;
use crate::evo::Bounds;

/// A bi-objective minimization problem over a box-constrained decision space.
///
/// `evaluate` must be pure; function-evaluation accounting is the caller's
/// responsibility (see [`crate::evo::Population::evaluate_all`]).
pub trait Problem {
    /// Decision-space dimension.
    fn dim(&self) -> usize;

    /// Number of objectives.
    fn objectives(&self) -> usize {
        2
    }

    fn bounds(&self) -> &Bounds;

    /// Evaluates one decision vector. `x` must lie within `bounds`.
    fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>>;

    fn name(&self) -> &str;
}
