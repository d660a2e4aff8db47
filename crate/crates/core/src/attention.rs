//! Attention-guided offspring generation for large-scale multi-objective
//! optimization.
//!
//! The optimizer shrinks an n-dimensional variation problem to a
//! k-dimensional one (k << n) each generation:
//!
//! 1. **Grouping** — decision variables are bucketed into k groups by
//!    ascending population variance ([`variance_vector`], [`build_key_matrix`]).
//! 2. **Queries** — g randomly sampled solutions are projected through the
//!    group matrix and divided by the projection of an anchor solution (the
//!    most isolated first-front member), yielding g ratio vectors in R^k
//!    ([`value_individual`], [`compute_queries`]).
//! 3. **Query variation & reconstruction** — the queries undergo one SBX +
//!    polynomial-mutation pass in query space ([`optimize_queries`]), are
//!    broadcast back to R^n through the group assignment
//!    ([`attention_vector`]), and rescale the anchor componentwise into new
//!    candidate solutions ([`reconstruct_offspring`]).
//!
//! [`attention_generation`] wires the pipeline into a generational MOEA: the
//! g reconstructed offspring are complemented with d−g conventional
//! tournament/SBX/mutation offspring, everything is evaluated, and the merged
//! pool is truncated back to size d by environmental selection.
//! [`run_attention_moea`] loops generations until the evaluation budget is
//! spent. [`dot_attention`] is the classic softmax attention primitive the
//! pipeline borrows its vocabulary from; it is exposed for reference and not
//! used by the optimizer itself.

use crate::error::{Error, Result};
use crate::evo::{
    assign_crowding, environmental_selection, fast_nondominated_sort, init_population,
    polynomial_mutation, sbx_crossover, tournament_select, Bounds, Individual, Population,
};
use crate::problems::Problem;
use crate::trace::{RunTrace, TraceRecorder};
use rand::seq::SliceRandom;
use rand::Rng;

/// Classic single-query attention: dot-product scores against every key,
/// softmax normalization, weighted sum of values. The weights are
/// nonnegative and sum to 1 (within floating-point roundoff).
pub fn dot_attention(query: &[f64], keys: &[Vec<f64>], values: &[Vec<f64>]) -> Result<Vec<f64>> {
    if keys.is_empty() {
        return Err(Error::InvalidArgument("need at least one key/value pair".into()));
    }
    if keys.len() != values.len() {
        return Err(Error::InvalidArgument(format!(
            "{} keys but {} values",
            keys.len(),
            values.len()
        )));
    }
    for key in keys {
        if key.len() != query.len() {
            return Err(Error::InvalidArgument(format!(
                "key dimension {} does not match query dimension {}",
                key.len(),
                query.len()
            )));
        }
    }
    let value_dim = values[0].len();
    if values.iter().any(|v| v.len() != value_dim) {
        return Err(Error::InvalidArgument("values must share one dimension".into()));
    }

    let scores: Vec<f64> = keys
        .iter()
        .map(|key| query.iter().zip(key).map(|(q, k)| q * k).sum())
        .collect();
    // Stable softmax: shift by the max score before exponentiating.
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut weights: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let norm: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= norm;
    }

    let mut out = vec![0.0; value_dim];
    for (w, v) in weights.iter().zip(values) {
        for (o, vi) in out.iter_mut().zip(v) {
            *o += w * vi;
        }
    }
    Ok(out)
}

/// One-hot assignment of n decision variables to k groups; the projection
/// matrix between full decision space and query space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyMatrix {
    group_of: Vec<usize>,
    k: usize,
}

impl KeyMatrix {
    /// Decision-space dimension n.
    pub fn n(&self) -> usize {
        self.group_of.len()
    }

    /// Query-space dimension k.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Group index of variable `i`.
    pub fn group(&self, i: usize) -> usize {
        self.group_of[i]
    }

    /// One-hot matrix entry: 1.0 iff variable `i` belongs to group `j`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if self.group_of[i] == j {
            1.0
        } else {
            0.0
        }
    }

    /// Number of variables per group.
    pub fn group_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &g in &self.group_of {
            sizes[g] += 1;
        }
        sizes
    }

    /// Projects a decision vector into query space: out[j] is the sum of the
    /// components assigned to group j.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n() {
            return Err(Error::InvalidArgument(format!(
                "cannot project a vector of length {} through a {}-variable grouping",
                x.len(),
                self.n()
            )));
        }
        let mut out = vec![0.0; self.k];
        for (&xi, &g) in x.iter().zip(&self.group_of) {
            out[g] += xi;
        }
        Ok(out)
    }
}

/// Per-variable population variance of the decision vectors, computed as
/// mean-of-squares minus square-of-mean with denominator d (population size)
/// and floored at zero against roundoff.
pub fn variance_vector(pop: &Population) -> Result<Vec<f64>> {
    if pop.size() < 2 {
        return Err(Error::InvalidArgument(format!(
            "variance needs at least 2 members, got {}",
            pop.size()
        )));
    }
    let n = pop.members[0].x.len();
    let d = pop.size() as f64;
    let mut sum = vec![0.0; n];
    let mut sum_sq = vec![0.0; n];
    let mut min = vec![f64::INFINITY; n];
    let mut max = vec![f64::NEG_INFINITY; n];
    for m in &pop.members {
        for (i, &xi) in m.x.iter().enumerate() {
            sum[i] += xi;
            sum_sq[i] += xi * xi;
            min[i] = min[i].min(xi);
            max[i] = max[i].max(xi);
        }
    }
    Ok((0..n)
        .map(|i| {
            // A collapsed component is exactly zero, not formula roundoff.
            if min[i] == max[i] {
                return 0.0;
            }
            let mean = sum[i] / d;
            (sum_sq[i] / d - mean * mean).max(0.0)
        })
        .collect())
}

/// Partitions variables into k contiguous groups of near-equal size (sizes
/// differ by at most 1) along the ascending-variance order, ties broken by
/// variable index. Group 0 holds the lowest-variance variables.
pub fn build_key_matrix(variance: &[f64], k: usize) -> Result<KeyMatrix> {
    let n = variance.len();
    if k < 1 || k > n {
        return Err(Error::InvalidConfig(format!(
            "group count must be in [1, {n}], got {k}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        variance[a]
            .partial_cmp(&variance[b])
            .expect("variance must not be NaN")
            .then(a.cmp(&b))
    });

    let base = n / k;
    let extra = n % k; // the first `extra` groups take one more variable
    let mut group_of = vec![0usize; n];
    let mut cursor = 0;
    for j in 0..k {
        let size = base + usize::from(j < extra);
        for &var in &order[cursor..cursor + size] {
            group_of[var] = j;
        }
        cursor += size;
    }
    Ok(KeyMatrix { group_of, k })
}

/// Index of the anchor member: the first-front individual with the largest
/// crowding distance. Ties (including the +infinity extremes) prefer the
/// smaller first objective, then the smaller member index. Requires ranks
/// and crowding assigned.
pub fn value_individual(pop: &Population) -> Result<usize> {
    if pop
        .members
        .iter()
        .any(|m| m.rank.is_none() || m.crowding.is_none())
    {
        return Err(Error::InvalidState(
            "population must be sorted and crowded before anchor selection".into(),
        ));
    }
    pop.front0_indices()
        .into_iter()
        .min_by(|&a, &b| {
            let ma = &pop.members[a];
            let mb = &pop.members[b];
            // larger crowding first, then smaller f[0], then smaller index
            mb.crowding
                .unwrap()
                .partial_cmp(&ma.crowding.unwrap())
                .unwrap()
                .then(
                    ma.objectives()[0]
                        .partial_cmp(&mb.objectives()[0])
                        .unwrap(),
                )
                .then(a.cmp(&b))
        })
        .ok_or_else(|| Error::InvalidState("population has no first front".into()))
}

/// A batch of query vectors in R^k together with the sampled solutions they
/// were derived from.
#[derive(Debug, Clone, PartialEq)]
pub struct QuerySet {
    pub queries: Vec<Vec<f64>>,
    pub base: Vec<Individual>,
}

/// Builds one query per base solution: both the solution and the anchor `v`
/// are projected through the group matrix, and the query is the
/// componentwise ratio of the projections. Anchor projections with magnitude
/// at most `epsilon` yield the neutral ratio 1.0.
pub fn compute_queries(
    base: &[Individual],
    v: &Individual,
    key: &KeyMatrix,
    epsilon: f64,
) -> Result<QuerySet> {
    if base.is_empty() {
        return Err(Error::InvalidArgument("need at least one sampled solution".into()));
    }
    let pv = key.project(&v.x)?;
    let queries = base
        .iter()
        .map(|ind| {
            let p = key.project(&ind.x)?;
            Ok(p.iter()
                .zip(&pv)
                .map(|(&pj, &pvj)| if pvj.abs() > epsilon { pj / pvj } else { 1.0 })
                .collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(QuerySet { queries, base: base.to_vec() })
}

/// Settings for the query-space variation pass.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryVariation {
    /// Apply SBX to random query pairs (disable to test the mutation path
    /// alone).
    pub use_crossover: bool,
    /// Per-component mutation probability; `None` means 1/k.
    pub pm: Option<f64>,
    pub eta_c: f64,
    pub eta_m: f64,
    /// Number of variation passes applied back to back.
    pub passes: usize,
}

impl Default for QueryVariation {
    fn default() -> Self {
        Self {
            use_crossover: true,
            pm: None,
            eta_c: 20.0,
            eta_m: 20.0,
            passes: 1,
        }
    }
}

/// Evolves the query batch without spending function evaluations: queries
/// are paired at random and undergo SBX plus polynomial mutation inside the
/// query box (componentwise min/max of the batch, expanded by 10%). Children
/// replace their parents positionally, so disabling crossover and forcing
/// pm = 0 reproduces the input exactly. Query fitness is realized only
/// downstream, when the reconstructed offspring face environmental
/// selection.
pub fn optimize_queries<R: Rng>(
    q: &QuerySet,
    variation: &QueryVariation,
    rng: &mut R,
) -> Result<QuerySet> {
    if q.queries.is_empty() {
        return Err(Error::InvalidArgument("empty query set".into()));
    }
    if variation.passes == 0 {
        return Err(Error::InvalidConfig("variation passes must be positive".into()));
    }
    let mut current = q.queries.clone();
    for _ in 0..variation.passes {
        current = variation_pass(&current, variation, rng)?;
    }
    Ok(QuerySet { queries: current, base: q.base.clone() })
}

fn variation_pass<R: Rng>(
    queries: &[Vec<f64>],
    variation: &QueryVariation,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    let k = queries[0].len();
    let pm = variation.pm.unwrap_or(1.0 / k as f64);

    // Query box: the batch's componentwise span, widened by 10% on each side.
    // Degenerate spans (single query, or a collapsed component) get a small
    // absolute margin so the box stays a valid open interval.
    let mut lo = vec![f64::INFINITY; k];
    let mut hi = vec![f64::NEG_INFINITY; k];
    for q in queries {
        for j in 0..k {
            lo[j] = lo[j].min(q[j]);
            hi[j] = hi[j].max(q[j]);
        }
    }
    for j in 0..k {
        let margin =
            (0.1 * (hi[j] - lo[j])).max(1e-6 * lo[j].abs().max(hi[j].abs()).max(1.0));
        lo[j] -= margin;
        hi[j] += margin;
    }
    let bounds = Bounds::new(lo, hi)?;

    let mut order: Vec<usize> = (0..queries.len()).collect();
    order.shuffle(rng);
    let mut out: Vec<Vec<f64>> = vec![Vec::new(); queries.len()];
    for pair in order.chunks(2) {
        if let [i, j] = *pair {
            let (c1, c2) = if variation.use_crossover {
                sbx_crossover(
                    &Individual::new(queries[i].clone()),
                    &Individual::new(queries[j].clone()),
                    variation.eta_c,
                    &bounds,
                    rng,
                )?
            } else {
                (
                    Individual::new(queries[i].clone()),
                    Individual::new(queries[j].clone()),
                )
            };
            out[i] = polynomial_mutation(&c1, variation.eta_m, pm, &bounds, rng)?.x;
            out[j] = polynomial_mutation(&c2, variation.eta_m, pm, &bounds, rng)?.x;
        } else {
            // Odd batch: the unpaired query gets a mutation-only pass.
            let i = pair[0];
            let ind = Individual::new(queries[i].clone());
            out[i] = polynomial_mutation(&ind, variation.eta_m, pm, &bounds, rng)?.x;
        }
    }
    Ok(out)
}

/// Broadcasts a k-dimensional query back to decision space through the
/// group assignment: a[i] = q[group(i)].
pub fn attention_vector(q: &[f64], key: &KeyMatrix) -> Result<Vec<f64>> {
    if q.len() != key.k() {
        return Err(Error::InvalidArgument(format!(
            "query length {} does not match group count {}",
            q.len(),
            key.k()
        )));
    }
    Ok((0..key.n()).map(|i| q[key.group(i)]).collect())
}

/// Rescales the anchor solution componentwise by the attention vector and
/// clamps into bounds: x_new[i] = clamp(a[i] * v.x[i]). The all-ones
/// attention vector reproduces the anchor exactly. Returns an unevaluated
/// individual.
pub fn reconstruct_offspring(a: &[f64], v: &Individual, bounds: &Bounds) -> Result<Individual> {
    if a.len() != v.x.len() || a.len() != bounds.dim() {
        return Err(Error::InvalidArgument(format!(
            "inconsistent dimensions: attention {}, anchor {}, bounds {}",
            a.len(),
            v.x.len(),
            bounds.dim()
        )));
    }
    let x = a
        .iter()
        .zip(&v.x)
        .enumerate()
        .map(|(i, (&ai, &vi))| bounds.clamp(i, ai * vi))
        .collect();
    Ok(Individual::new(x))
}

/// Hyperparameters of the attention optimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionParams {
    /// Query dimension (variable-group count), 1 <= k <= n.
    pub k: usize,
    /// Number of solutions sampled as query bases, 1 <= g <= d.
    pub g: usize,
    /// Population size.
    pub d: usize,
    /// Total function-evaluation budget, at least d.
    pub fe_budget: u64,
    /// Magnitude guard for the query-ratio denominator.
    pub epsilon: f64,
    pub query_variation: QueryVariation,
    /// Test hook: skip the ratio computation and query variation, forcing
    /// every query to the all-ones vector (offspring reproduce the anchor).
    pub identity_queries: bool,
    /// Ablation: generate only the g attention offspring per generation,
    /// no conventional complement.
    pub pure_attention: bool,
}

impl AttentionParams {
    pub fn new(k: usize, g: usize, d: usize, fe_budget: u64) -> Self {
        Self {
            k,
            g,
            d,
            fe_budget,
            epsilon: 1e-12,
            query_variation: QueryVariation::default(),
            identity_queries: false,
            pure_attention: false,
        }
    }

    /// Validates against the decision-space dimension n.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k < 1 || self.k > n {
            return Err(Error::InvalidConfig(format!(
                "k must be in [1, {n}], got {}",
                self.k
            )));
        }
        if self.g < 1 || self.g > self.d {
            return Err(Error::InvalidConfig(format!(
                "g must be in [1, {}], got {}",
                self.d, self.g
            )));
        }
        if self.d < 2 {
            return Err(Error::InvalidConfig(format!(
                "population size must be at least 2, got {}",
                self.d
            )));
        }
        if self.fe_budget < self.d as u64 {
            return Err(Error::InvalidConfig(format!(
                "evaluation budget {} cannot cover the initial population of {}",
                self.fe_budget, self.d
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.query_variation.passes == 0 {
            return Err(Error::InvalidConfig("variation passes must be positive".into()));
        }
        Ok(())
    }
}

fn evaluator<'a>(problem: &'a dyn Problem) -> impl Fn(&[f64]) -> Vec<f64> + 'a {
    // Optimizers clamp every candidate before evaluation, so a failure here
    // is an internal bug, not a user error.
    move |x| {
        problem
            .evaluate(x)
            .expect("objective evaluation failed on an optimizer-produced vector")
    }
}

/// Members seeding each objective's edge cluster in [`select_query_base`].
const EDGE_CLUSTER: usize = 3;

/// Picks the g base solutions whose queries drive reconstruction: first the
/// few lowest members on each objective (edge clusters), then the
/// largest-crowding members until g are chosen, all without duplicates.
///
/// Edge clusters keep the population's boundary scales inside the query set,
/// so the variation box spans the full extent of what the population has
/// reached and its margin can push past the current best edge instead of
/// only interpolating; the crowding fill then aims the remaining queries at
/// the least-covered regions. Requires ranks and crowding assigned.
fn select_query_base(pop: &Population, g: usize) -> Result<Vec<Individual>> {
    if pop
        .members
        .iter()
        .any(|m| m.rank.is_none() || m.crowding.is_none())
    {
        return Err(Error::InvalidState(
            "population must be sorted and crowded before base sampling".into(),
        ));
    }
    let objective_count = pop.members[0].objectives().len();
    let mut chosen: Vec<usize> = Vec::with_capacity(g);
    for m in 0..objective_count {
        let mut by_objective: Vec<usize> = (0..pop.size()).collect();
        by_objective.sort_by(|&a, &b| {
            pop.members[a].objectives()[m]
                .partial_cmp(&pop.members[b].objectives()[m])
                .unwrap()
                .then(a.cmp(&b))
        });
        for &i in by_objective.iter().take(EDGE_CLUSTER) {
            if chosen.len() < g && !chosen.contains(&i) {
                chosen.push(i);
            }
        }
    }
    let mut by_spread: Vec<usize> = (0..pop.size()).collect();
    by_spread.sort_by(|&a, &b| {
        let ma = &pop.members[a];
        let mb = &pop.members[b];
        // larger crowding first, then better rank, then smaller index
        mb.crowding
            .unwrap()
            .partial_cmp(&ma.crowding.unwrap())
            .unwrap()
            .then(ma.rank.unwrap().cmp(&mb.rank.unwrap()))
            .then(a.cmp(&b))
    });
    for &i in &by_spread {
        if chosen.len() >= g {
            break;
        }
        if !chosen.contains(&i) {
            chosen.push(i);
        }
    }
    Ok(chosen
        .into_iter()
        .map(|i| pop.members[i].clone())
        .collect())
}

/// One generation of the attention optimizer: build the pipeline offspring
/// (g of them) plus d−g conventional tournament/SBX/mutation offspring,
/// evaluate at most the remaining budget, and select d survivors from the
/// merged pool. The returned population carries updated ranks, crowding and
/// FE count.
pub fn attention_generation<R: Rng>(
    pop: Population,
    params: &AttentionParams,
    problem: &dyn Problem,
    rng: &mut R,
) -> Result<Population> {
    let mut pop = pop;
    params.validate(problem.dim())?;
    if pop.size() != params.d {
        return Err(Error::InvalidArgument(format!(
            "expected population of {}, got {}",
            params.d,
            pop.size()
        )));
    }
    if !pop.all_evaluated() {
        return Err(Error::InvalidState("population must be evaluated".into()));
    }
    if pop
        .members
        .iter()
        .any(|m| m.rank.is_none() || m.crowding.is_none())
    {
        let fronts = fast_nondominated_sort(&mut pop)?;
        assign_crowding(&mut pop, &fronts)?;
    }

    // Grouping from current variable variances.
    let variance = variance_vector(&pop)?;
    let key = build_key_matrix(&variance, params.k)?;

    // Queries from g sampled solutions against the anchor.
    let base = select_query_base(&pop, params.g)?;
    let v = pop.members[value_individual(&pop)?].clone();
    let optimized = if params.identity_queries {
        QuerySet {
            queries: vec![vec![1.0; params.k]; params.g],
            base,
        }
    } else {
        let queries = compute_queries(&base, &v, &key, params.epsilon)?;
        optimize_queries(&queries, &params.query_variation, rng)?
    };

    // Reconstruction into decision space.
    let mut offspring: Vec<Individual> = Vec::with_capacity(params.d);
    for q in &optimized.queries {
        let a = attention_vector(q, &key)?;
        offspring.push(reconstruct_offspring(&a, &v, problem.bounds())?);
    }

    // Conventional complement keeps exploration pressure when the attention
    // channel collapses (e.g. near-zero variance late in a run).
    if !params.pure_attention {
        let pm = 1.0 / problem.dim() as f64;
        while offspring.len() < params.d {
            let pa = tournament_select(&pop, rng);
            let pb = tournament_select(&pop, rng);
            let (c1, c2) = sbx_crossover(
                &pop.members[pa],
                &pop.members[pb],
                20.0,
                problem.bounds(),
                rng,
            )?;
            offspring.push(polynomial_mutation(&c1, 20.0, pm, problem.bounds(), rng)?);
            if offspring.len() < params.d {
                offspring.push(polynomial_mutation(&c2, 20.0, pm, problem.bounds(), rng)?);
            }
        }
    }

    // Never spend past the budget: keep only as many offspring as there are
    // evaluations left (attention offspring take precedence in the order).
    let remaining = params.fe_budget.saturating_sub(pop.fe_count);
    if (offspring.len() as u64) > remaining {
        offspring.truncate(remaining as usize);
    }

    let fe_count = pop.fe_count;
    let mut members = pop.members;
    members.extend(offspring);
    let mut merged = Population::new(members);
    merged.fe_count = fe_count;
    merged.evaluate_all(&evaluator(problem));
    environmental_selection(merged, params.d)
}

/// Full optimizer run: initialize and evaluate d individuals, then apply
/// [`attention_generation`] until the budget is exhausted. Returns the final
/// first front (sorted by first objective) and the recorded trace.
pub fn run_attention_moea<R: Rng>(
    problem: &dyn Problem,
    params: &AttentionParams,
    mut recorder: TraceRecorder,
    rng: &mut R,
) -> Result<(Vec<Individual>, RunTrace)> {
    params.validate(problem.dim())?;
    let mut pop = init_population(problem.bounds(), params.d, rng)?;
    pop.evaluate_all(&evaluator(problem));
    let fronts = fast_nondominated_sort(&mut pop)?;
    assign_crowding(&mut pop, &fronts)?;
    recorder.observe(0, &pop, pop.fe_count >= params.fe_budget)?;

    let mut generation = 0;
    while pop.fe_count < params.fe_budget {
        generation += 1;
        pop = attention_generation(pop, params, problem, rng)?;
        recorder.observe(generation, &pop, pop.fe_count >= params.fe_budget)?;
    }
    Ok((pop.front0_sorted(), recorder.finish(&pop)))
}
