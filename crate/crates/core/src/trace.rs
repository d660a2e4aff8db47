//! Per-generation convergence records produced by optimizer runs.

use crate::error::{Error, Result};
use crate::evo::{dominates, Population};
use crate::metrics::{hv_2d, igd, NormalizationContext};

/// One sampled point of a run: generation index, cumulative function
/// evaluations, and the two quality indicators of the current front.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub generation: usize,
    pub fe: u64,
    pub hv: f64,
    pub igd: f64,
}

/// Everything a finished run reports: the sampled indicator trajectory and
/// the final non-dominated front (objective vectors, sorted by first
/// objective).
#[derive(Debug, Clone)]
pub struct RunTrace {
    pub rows: Vec<TraceRow>,
    pub final_front: Vec<Vec<f64>>,
}

/// Samples indicator values during a run: one row for the initial population,
/// one per `trace_every` generations, and one for the final generation.
///
/// With `archive` set, indicators are computed over the cumulative
/// non-dominated archive of everything scored so far instead of the current
/// population front, which makes hypervolume non-decreasing across rows.
#[derive(Debug)]
pub struct TraceRecorder {
    reference: Vec<Vec<f64>>,
    ctx: NormalizationContext,
    trace_every: usize,
    archive: bool,
    archive_front: Vec<Vec<f64>>,
    rows: Vec<TraceRow>,
}

impl TraceRecorder {
    pub fn new(reference: Vec<Vec<f64>>, trace_every: usize, archive: bool) -> Result<Self> {
        if trace_every == 0 {
            return Err(Error::InvalidConfig("trace_every must be positive".into()));
        }
        let ctx = NormalizationContext::from_reference(&reference)?;
        Ok(Self {
            reference,
            ctx,
            trace_every,
            archive,
            archive_front: Vec::new(),
            rows: Vec::new(),
        })
    }

    pub fn context(&self) -> &NormalizationContext {
        &self.ctx
    }

    pub fn reference(&self) -> &[Vec<f64>] {
        &self.reference
    }

    /// Rank-0 objective vectors of a population, sorted by first objective.
    pub fn population_front(pop: &Population) -> Vec<Vec<f64>> {
        let mut front: Vec<Vec<f64>> = pop
            .front0_indices()
            .into_iter()
            .map(|i| pop.members[i].objectives().to_vec())
            .collect();
        front.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
        front
    }

    fn merge_into_archive(&mut self, front: &[Vec<f64>]) {
        for p in front {
            if self.archive_front.iter().any(|q| dominates(q, p) || q == p) {
                continue;
            }
            self.archive_front.retain(|q| !dominates(p, q));
            self.archive_front.push(p.clone());
        }
    }

    /// Records the population state if this generation is due for sampling
    /// (always for generation 0 and whenever `is_final` is set).
    pub fn observe(&mut self, generation: usize, pop: &Population, is_final: bool) -> Result<()> {
        let due = generation % self.trace_every == 0 || is_final;
        if self.archive {
            // The archive must absorb every generation, sampled or not.
            let front = Self::population_front(pop);
            self.merge_into_archive(&front);
        }
        if !due {
            return Ok(());
        }
        if let Some(last) = self.rows.last() {
            if last.generation == generation {
                return Ok(()); // final generation already sampled by cadence
            }
        }
        let front = if self.archive {
            self.archive_front.clone()
        } else {
            Self::population_front(pop)
        };
        let hv = hv_2d(&front, &self.ctx)?;
        let igd_v = igd(&front, &self.reference, &self.ctx)?;
        self.rows.push(TraceRow { generation, fe: pop.fe_count, hv, igd: igd_v });
        Ok(())
    }

    pub fn finish(self, final_pop: &Population) -> RunTrace {
        RunTrace {
            rows: self.rows,
            final_front: Self::population_front(final_pop),
        }
    }
}
