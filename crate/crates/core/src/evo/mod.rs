//! Generic multi-objective evolutionary machinery: population representation,
//! non-dominated sorting, crowding-distance diversity maintenance, variation
//! operators and environmental selection.
//!
//! All objectives are minimized. Identical seeds yield bit-identical
//! trajectories for every operation in this module.

mod selection;
mod sorting;
mod variation;

pub use selection::{environmental_selection, tournament_select};
pub use sorting::{assign_crowding, crowding_distance, fast_nondominated_sort};
pub use variation::{polynomial_mutation, sbx_crossover};

use crate::error::{Error, Result};
use rand::Rng;

/// Box constraints of the decision space: `lower[i] < upper[i]` for all i.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::InvalidConfig(format!(
                "bounds length mismatch: {} vs {}",
                lower.len(),
                upper.len()
            )));
        }
        if lower.is_empty() {
            return Err(Error::InvalidConfig("bounds must not be empty".into()));
        }
        for i in 0..lower.len() {
            if !(lower[i] < upper[i]) {
                return Err(Error::InvalidConfig(format!(
                    "bounds[{i}]: lower {} must be strictly below upper {}",
                    lower[i], upper[i]
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Uniform box `[lo, hi]^dim`.
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn clamp(&self, i: usize, value: f64) -> f64 {
        value.clamp(self.lower[i], self.upper[i])
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .enumerate()
                .all(|(i, &v)| v >= self.lower[i] && v <= self.upper[i])
    }
}

/// A candidate solution: decision vector, objective vector once evaluated,
/// and the rank / crowding distance assigned by sorting.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub x: Vec<f64>,
    pub f: Option<Vec<f64>>,
    pub rank: Option<usize>,
    pub crowding: Option<f64>,
}

impl Individual {
    pub fn new(x: Vec<f64>) -> Self {
        Self {
            x,
            f: None,
            rank: None,
            crowding: None,
        }
    }

    pub fn is_evaluated(&self) -> bool {
        self.f.is_some()
    }

    /// Objective vector; panics if the individual has not been evaluated.
    pub fn objectives(&self) -> &[f64] {
        self.f.as_deref().expect("individual not evaluated")
    }
}

/// Returns true iff `a` Pareto-dominates `b` (minimization: no worse in every
/// objective, strictly better in at least one).
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut strictly_better = false;
    for (&ai, &bi) in a.iter().zip(b) {
        if ai > bi {
            return false;
        }
        if ai < bi {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Fixed-capacity multiset of individuals plus the monotone
/// function-evaluation counter of the run that owns it.
#[derive(Debug, Clone)]
pub struct Population {
    pub members: Vec<Individual>,
    pub fe_count: u64,
}

impl Population {
    pub fn new(members: Vec<Individual>) -> Self {
        Self {
            members,
            fe_count: 0,
        }
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn all_evaluated(&self) -> bool {
        self.members.iter().all(Individual::is_evaluated)
    }

    /// Evaluates every unevaluated member, charging one FE each.
    pub fn evaluate_all(&mut self, evaluate: &dyn Fn(&[f64]) -> Vec<f64>) {
        for ind in &mut self.members {
            if ind.f.is_none() {
                ind.f = Some(evaluate(&ind.x));
                self.fe_count += 1;
            }
        }
    }

    /// Index set of the current first front. Requires ranks assigned.
    pub fn front0_indices(&self) -> Vec<usize> {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, m)| m.rank == Some(0))
            .map(|(i, _)| i)
            .collect()
    }

    /// Clones of the current first front, sorted by first objective.
    /// Requires ranks assigned and members evaluated.
    pub fn front0_sorted(&self) -> Vec<Individual> {
        let mut front: Vec<Individual> = self
            .front0_indices()
            .into_iter()
            .map(|i| self.members[i].clone())
            .collect();
        front.sort_by(|a, b| {
            a.objectives()[0]
                .partial_cmp(&b.objectives()[0])
                .expect("objective values must not be NaN")
        });
        front
    }
}

/// Samples `d` individuals uniformly per-component within `bounds`.
/// None are evaluated.
pub fn init_population<R: Rng>(bounds: &Bounds, d: usize, rng: &mut R) -> Result<Population> {
    if d < 2 {
        return Err(Error::InvalidConfig(format!(
            "population size must be at least 2, got {d}"
        )));
    }
    let members = (0..d)
        .map(|_| {
            let x = (0..bounds.dim())
                .map(|i| rng.gen_range(bounds.lower()[i]..=bounds.upper()[i]))
                .collect();
            Individual::new(x)
        })
        .collect();
    Ok(Population::new(members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn init_population_within_bounds() {
        let bounds = Bounds::uniform(3, 0.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pop = init_population(&bounds, 4, &mut rng).unwrap();
        assert_eq!(pop.size(), 4);
        assert_eq!(pop.fe_count, 0);
        for ind in &pop.members {
            assert!(bounds.contains(&ind.x));
            assert!(!ind.is_evaluated());
        }
    }

    #[test]
    fn init_population_rejects_tiny() {
        let bounds = Bounds::uniform(3, 0.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(matches!(
            init_population(&bounds, 1, &mut rng),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn degenerate_bounds_rejected() {
        // lower[0] == upper[0]
        let err = Bounds::new(vec![1.0, 0.0], vec![1.0, 2.0]);
        assert!(matches!(err, Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn init_population_same_seed_identical() {
        let bounds = Bounds::uniform(5, -2.0, 3.0).unwrap();
        let a = init_population(&bounds, 10, &mut ChaCha8Rng::seed_from_u64(99)).unwrap();
        let b = init_population(&bounds, 10, &mut ChaCha8Rng::seed_from_u64(99)).unwrap();
        for (ia, ib) in a.members.iter().zip(&b.members) {
            assert_eq!(ia.x, ib.x);
        }
    }

    #[test]
    fn dominance_is_strict() {
        assert!(dominates(&[1.0, 2.0], &[2.0, 2.0]));
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0]));
        assert!(!dominates(&[1.0, 3.0], &[2.0, 2.0]));
    }
}
