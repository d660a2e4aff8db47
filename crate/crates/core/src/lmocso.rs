//! LMOCSO baseline: large-scale multi-objective optimization with a
//! competitive swarm optimizer.
//!
//! Each generation the swarm is split into random pairs. Within a pair, the
//! particle with the better (rank, crowding) score wins and stays put; the
//! loser learns from the winner through a two-phase velocity update
//!
//! ```text
//! vel'[t] = r1[t]·vel[t] + r2[t]·(x_winner[t] − x_loser[t])
//! x'[t]   = x[t] + vel'[t] + r1[t]·(vel'[t] − vel[t])
//! ```
//!
//! with r1, r2 drawn per-dimension from U(0,1), followed by clamping and
//! polynomial mutation. Only losers are re-evaluated, so a generation costs
//! floor(d/2) function evaluations; the winners-plus-updated-losers pool then
//! passes through environmental selection.

use crate::error::{Error, Result};
use crate::evo::{
    assign_crowding, environmental_selection, fast_nondominated_sort, init_population,
    polynomial_mutation, Bounds, Individual, Population,
};
use crate::problems::Problem;
use crate::trace::{RunTrace, TraceRecorder};
use rand::seq::SliceRandom;
use rand::Rng;

/// A swarm member: current solution plus its velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub individual: Individual,
    pub velocity: Vec<f64>,
}

impl Particle {
    /// Wraps an individual with zero initial velocity.
    pub fn at_rest(individual: Individual) -> Self {
        let n = individual.x.len();
        Self {
            individual,
            velocity: vec![0.0; n],
        }
    }
}

/// The loser's two-phase update. Returns the clamped new position and the
/// new velocity. A zero-velocity loser identical to its winner stays exactly
/// in place (both update terms vanish).
fn loser_update<R: Rng>(
    x_loser: &[f64],
    velocity: &[f64],
    x_winner: &[f64],
    bounds: &Bounds,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let n = x_loser.len();
    let mut new_vel = vec![0.0; n];
    let mut new_x = vec![0.0; n];
    for t in 0..n {
        let r1: f64 = rng.gen();
        let r2: f64 = rng.gen();
        let v = r1 * velocity[t] + r2 * (x_winner[t] - x_loser[t]);
        new_vel[t] = v;
        new_x[t] = bounds.clamp(t, x_loser[t] + v + r1 * (v - velocity[t]));
    }
    (new_x, new_vel)
}

/// Returns true iff score (rank_b, crowding_b) beats score (rank_a, crowding_a).
fn beats(rank_b: usize, crowd_b: f64, rank_a: usize, crowd_a: f64) -> bool {
    rank_b < rank_a || (rank_b == rank_a && crowd_b > crowd_a)
}

/// One competitive-swarm generation over a swarm of size d.
///
/// At most `max_evals` losers are updated and re-evaluated (the budget cap);
/// losers beyond the cap keep their previous state. An odd swarm leaves one
/// particle unpaired and unchanged. Returns the selected swarm (size d,
/// ranks and crowding refreshed) and the number of evaluations spent.
pub fn lmocso_generation<R: Rng>(
    mut swarm: Vec<Particle>,
    d: usize,
    problem: &dyn Problem,
    max_evals: u64,
    rng: &mut R,
) -> Result<(Vec<Particle>, u64)> {
    if swarm.len() != d || d < 2 {
        return Err(Error::InvalidArgument(format!(
            "expected a swarm of {d} (at least 2), got {}",
            swarm.len()
        )));
    }
    if swarm.iter().any(|p| !p.individual.is_evaluated()) {
        return Err(Error::InvalidState("swarm must be evaluated".into()));
    }
    let bounds = problem.bounds();
    let n = problem.dim();

    // Fresh competition scores: rank primary, crowding secondary.
    let mut score_pop =
        Population::new(swarm.iter().map(|p| p.individual.clone()).collect());
    let fronts = fast_nondominated_sort(&mut score_pop)?;
    assign_crowding(&mut score_pop, &fronts)?;
    for (p, m) in swarm.iter_mut().zip(&score_pop.members) {
        p.individual.rank = m.rank;
        p.individual.crowding = m.crowding;
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.shuffle(rng);
    let mut spent = 0u64;
    for pair in order.chunks(2) {
        let [i, j] = *pair else { continue }; // odd tail: unpaired, unchanged
        let (ri, ci) = (swarm[i].individual.rank.unwrap(), swarm[i].individual.crowding.unwrap());
        let (rj, cj) = (swarm[j].individual.rank.unwrap(), swarm[j].individual.crowding.unwrap());
        let (winner, loser) = if beats(rj, cj, ri, ci) { (j, i) } else { (i, j) };
        if spent >= max_evals {
            continue; // budget cap: this loser stays un-updated
        }
        let (new_x, new_vel) = loser_update(
            &swarm[loser].individual.x,
            &swarm[loser].velocity,
            &swarm[winner].individual.x,
            bounds,
            rng,
        );
        let mutated =
            polynomial_mutation(&Individual::new(new_x), 20.0, 1.0 / n as f64, bounds, rng)?;
        swarm[loser].individual = mutated;
        swarm[loser].velocity = new_vel;
        spent += 1;
    }

    // Re-evaluate exactly the updated losers, then refresh ranks through
    // selection. The pool size equals d, so selection preserves member order
    // and acts as a rank/crowding refresh.
    let mut pool = Population::new(swarm.iter().map(|p| p.individual.clone()).collect());
    pool.evaluate_all(&|x: &[f64]| {
        problem
            .evaluate(x)
            .expect("objective evaluation failed on an optimizer-produced vector")
    });
    debug_assert_eq!(pool.fe_count, spent);
    let selected = environmental_selection(pool, d)?;
    for (p, m) in swarm.iter_mut().zip(selected.members) {
        debug_assert_eq!(p.individual.x, m.x);
        p.individual = m;
    }
    Ok((swarm, spent))
}

/// Full baseline run: initialize and evaluate d particles at rest, then loop
/// [`lmocso_generation`] until the budget is exhausted. Returns the final
/// first front (sorted by first objective) and the recorded trace — the same
/// schema the attention optimizer produces, for column-aligned comparison.
pub fn run_lmocso<R: Rng>(
    problem: &dyn Problem,
    d: usize,
    fe_budget: u64,
    mut recorder: TraceRecorder,
    rng: &mut R,
) -> Result<(Vec<Individual>, RunTrace)> {
    if fe_budget < d as u64 {
        return Err(Error::InvalidConfig(format!(
            "evaluation budget {fe_budget} cannot cover the initial population of {d}"
        )));
    }
    let mut pop = init_population(problem.bounds(), d, rng)?;
    pop.evaluate_all(&|x: &[f64]| {
        problem
            .evaluate(x)
            .expect("objective evaluation failed on an optimizer-produced vector")
    });
    let fronts = fast_nondominated_sort(&mut pop)?;
    assign_crowding(&mut pop, &fronts)?;
    recorder.observe(0, &pop, pop.fe_count >= fe_budget)?;

    let mut swarm: Vec<Particle> = pop
        .members
        .iter()
        .cloned()
        .map(Particle::at_rest)
        .collect();
    let mut fe = pop.fe_count;
    let mut generation = 0;
    let mut view = pop;
    while fe < fe_budget {
        generation += 1;
        let (next, spent) = lmocso_generation(swarm, d, problem, fe_budget - fe, rng)?;
        swarm = next;
        fe += spent;
        view = Population::new(swarm.iter().map(|p| p.individual.clone()).collect());
        view.fe_count = fe;
        recorder.observe(generation, &view, fe >= fe_budget)?;
    }
    Ok((view.front0_sorted(), recorder.finish(&view)))
}
