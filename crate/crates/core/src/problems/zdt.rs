use super::Problem;
use crate::error::{Error, Result};
use crate::evo::Bounds;

/// The two classic bi-objective test functions used to validate optimizer
/// behavior against analytically known Pareto fronts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZdtVariant {
    /// Convex front: `f2 = 1 - sqrt(f1)`.
    Zdt1,
    /// Concave front: `f2 = 1 - f1^2`.
    Zdt2,
}

/// Benchmark problem on the unit box `[0,1]^n` with
/// `f1 = x_0`, `g = 1 + 9/(n-1) * sum(x_1..x_{n-1})`, and
/// `f2 = g * h(f1, g)` where `h` depends on the variant.
#[derive(Debug, Clone)]
pub struct ZdtProblem {
    variant: ZdtVariant,
    bounds: Bounds,
    name: &'static str,
}

impl ZdtProblem {
    pub fn new(variant: ZdtVariant, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 decision variables, got {n}"
            )));
        }
        Ok(Self {
            variant,
            bounds: Bounds::new(vec![0.0; n], vec![1.0; n])?,
            name: match variant {
                ZdtVariant::Zdt1 => "zdt1",
                ZdtVariant::Zdt2 => "zdt2",
            },
        })
    }

    pub fn variant(&self) -> ZdtVariant {
        self.variant
    }
}

impl Problem for ZdtProblem {
    fn dim(&self) -> usize {
        self.bounds.dim()
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        if !self.bounds.contains(x) {
            return Err(Error::InvalidArgument("point outside the unit box".into()));
        }
        let n = x.len();
        let f1 = x[0];
        let g = 1.0 + 9.0 * x[1..].iter().sum::<f64>() / (n as f64 - 1.0);
        let h = match self.variant {
            ZdtVariant::Zdt1 => 1.0 - (f1 / g).sqrt(),
            ZdtVariant::Zdt2 => 1.0 - (f1 / g).powi(2),
        };
        Ok(vec![f1, g * h])
    }

    fn name(&self) -> &str {
        self.name
    }
}

/// Uniform sampling of the true Pareto front (`g = 1`, `f1` on a uniform
/// grid over [0, 1]), for distance-based indicator reference sets.
pub fn zdt_front(variant: ZdtVariant, points: usize) -> Result<Vec<Vec<f64>>> {
    if points < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 reference points, got {points}"
        )));
    }
    Ok((0..points)
        .map(|i| {
            let f1 = i as f64 / (points as f64 - 1.0);
            let f2 = match variant {
                ZdtVariant::Zdt1 => 1.0 - f1.sqrt(),
                ZdtVariant::Zdt2 => 1.0 - f1 * f1,
            };
            vec![f1, f2]
        })
        .collect())
}
