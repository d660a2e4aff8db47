//! Self-contained oracle suites: each re-derives expected results through an
//! independent method (brute force, Monte Carlo, two-pass arithmetic, dual
//! implementation) and checks the production code against it. The suites
//! back the `validate` subcommand and the acceptance checks.

use moea_core::attention::variance_vector;
use moea_core::evo::{fast_nondominated_sort, Individual, Population};
use moea_core::metrics::{igd, NormalizationContext};
use moea_core::problems::{mcs_reference_front, McsConfig, McsInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Hypervolume implementation under test; injectable so a deliberately
/// corrupted implementation can prove the Monte Carlo suite detects it.
pub type HvFn = fn(&[Vec<f64>], &NormalizationContext) -> moea_core::Result<f64>;

/// Outcome of one oracle suite.
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl SuiteResult {
    fn pass(name: &'static str, detail: String) -> Self {
        Self {
            name,
            passed: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        Self {
            name,
            passed: false,
            detail,
        }
    }
}

/// Runs every suite exactly once, with `hv` as the hypervolume
/// implementation under test (pass [`moea_core::metrics::hv_2d`] normally).
pub fn run_all(hv: HvFn) -> Vec<SuiteResult> {
    vec![
        dominance_sort_suite(),
        hypervolume_suite(hv),
        igd_suite(),
        variance_suite(),
        mcs_model_suite(),
        reference_front_suite(),
    ]
}

/// Independent dominance test: no worse everywhere and not equal.
fn dominated_by(a: &[f64], b: &[f64]) -> bool {
    b.iter().zip(a).all(|(bi, ai)| bi <= ai) && b != a
}

/// Front partition by iterative peeling: a point is in the current front iff
/// no remaining point dominates it.
fn brute_force_fronts(objectives: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..objectives.len()).collect();
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| {
                !remaining
                    .iter()
                    .any(|&j| j != i && dominated_by(&objectives[i], &objectives[j]))
            })
            .collect();
        remaining.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

fn population_from_objectives(objectives: &[Vec<f64>]) -> Population {
    Population::new(
        objectives
            .iter()
            .map(|f| {
                let mut ind = Individual::new(f.clone());
                ind.f = Some(f.clone());
                ind
            })
            .collect(),
    )
}

/// Fast non-dominated sort vs the peeling oracle: exact partition equality on
/// 200 random populations (up to 50 members, 2 or 3 objectives).
pub fn dominance_sort_suite() -> SuiteResult {
    const NAME: &str = "dominance-sort";
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let cases = 200;
    for case in 0..cases {
        let n = rng.gen_range(1..=50);
        let m = if case % 2 == 0 { 2 } else { 3 };
        // Mix continuous and discretized objectives so exact ties occur.
        let objectives: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..m)
                    .map(|_| {
                        if rng.gen_bool(0.3) {
                            (rng.gen_range(0.0..1.0f64) * 4.0).round() / 4.0
                        } else {
                            rng.gen_range(0.0..1.0)
                        }
                    })
                    .collect()
            })
            .collect();
        let expected = brute_force_fronts(&objectives);
        let mut pop = population_from_objectives(&objectives);
        let got = match fast_nondominated_sort(&mut pop) {
            Ok(fronts) => fronts,
            Err(e) => return SuiteResult::fail(NAME, format!("case {case}: sort error: {e}")),
        };
        // Both sides list front members in ascending index order.
        let mut expected_sorted = expected;
        for front in &mut expected_sorted {
            front.sort_unstable();
        }
        if got != expected_sorted {
            return SuiteResult::fail(
                NAME,
                format!("case {case} (n={n}, m={m}): partition mismatch"),
            );
        }
    }
    SuiteResult::pass(NAME, format!("{cases}/{cases} random populations matched"))
}

/// Monte Carlo hypervolume oracle: uniform samples in the reference box,
/// counting the fraction dominated by some front point.
fn monte_carlo_hv(front: &[Vec<f64>], ctx: &NormalizationContext, samples: u64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normalized: Vec<[f64; 2]> = front.iter().map(|p| ctx.normalize(p)).collect();
    let (r0, r1) = (ctx.ref_point[0], ctx.ref_point[1]);
    let mut covered = 0u64;
    for _ in 0..samples {
        let z0 = rng.gen_range(0.0..r0);
        let z1 = rng.gen_range(0.0..r1);
        if normalized.iter().any(|p| p[0] <= z0 && p[1] <= z1) {
            covered += 1;
        }
    }
    r0 * r1 * covered as f64 / samples as f64
}

/// Exact hypervolume vs a 10^6-sample Monte Carlo estimate on 50 random
/// fronts (tolerance 1e-2 absolute), plus the hand-computed single-point pin.
pub fn hypervolume_suite(hv: HvFn) -> SuiteResult {
    const NAME: &str = "hypervolume-monte-carlo";
    let ctx = NormalizationContext {
        ideal: [0.0, 0.0],
        nadir: [1.0, 1.0],
        ref_point: [1.1, 1.1],
    };

    // Hand-computed pin: the single point (0.5, 0.5) dominates a square of
    // side 0.6 against (1.1, 1.1).
    let single = vec![vec![0.5, 0.5]];
    match hv(&single, &ctx) {
        Ok(v) if (v - 0.36).abs() <= 1e-12 => {}
        Ok(v) => return SuiteResult::fail(NAME, format!("single-point pin: got {v}, want 0.36")),
        Err(e) => return SuiteResult::fail(NAME, format!("single-point pin: error: {e}")),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let fronts = 50;
    let samples = 1_000_000;
    let mut worst = 0.0f64;
    for case in 0..fronts {
        let count = rng.gen_range(1..=30);
        // Points beyond the reference point exercise the drop rule.
        let cloud: Vec<Vec<f64>> = (0..count)
            .map(|_| vec![rng.gen_range(0.0..1.15), rng.gen_range(0.0..1.15)])
            .collect();
        let front: Vec<Vec<f64>> = cloud
            .iter()
            .filter(|p| !cloud.iter().any(|q| dominated_by(p, q)))
            .cloned()
            .collect();
        let exact = match hv(&front, &ctx) {
            Ok(v) => v,
            Err(e) => return SuiteResult::fail(NAME, format!("case {case}: error: {e}")),
        };
        let estimate = monte_carlo_hv(&front, &ctx, samples, 300 + case as u64);
        let diff = (exact - estimate).abs();
        worst = worst.max(diff);
        if diff > 1e-2 {
            return SuiteResult::fail(
                NAME,
                format!("case {case}: exact {exact} vs Monte Carlo {estimate} (diff {diff:.4})"),
            );
        }
    }
    SuiteResult::pass(
        NAME,
        format!("{fronts} fronts within 1e-2 of 10^6-sample estimates (worst diff {worst:.2e})"),
    )
}

/// IGD vs an independently written nearest-neighbor mean (tolerance 1e-12),
/// plus the self-distance pin.
pub fn igd_suite() -> SuiteResult {
    const NAME: &str = "igd-brute-force";
    let ctx = NormalizationContext {
        ideal: [0.0, 0.0],
        nadir: [2.0, 2.0],
        ref_point: [1.1, 1.1],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(404);

    // Self-distance must be exactly zero.
    let self_set: Vec<Vec<f64>> = (0..12)
        .map(|_| vec![rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0)])
        .collect();
    match igd(&self_set, &self_set, &ctx) {
        Ok(v) if v == 0.0 => {}
        Ok(v) => return SuiteResult::fail(NAME, format!("self-distance pin: got {v}, want 0")),
        Err(e) => return SuiteResult::fail(NAME, format!("self-distance pin: error: {e}")),
    }

    let cases = 100;
    for case in 0..cases {
        let front: Vec<Vec<f64>> = (0..rng.gen_range(1..=20))
            .map(|_| vec![rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0)])
            .collect();
        let reference: Vec<Vec<f64>> = (0..rng.gen_range(1..=40))
            .map(|_| vec![rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0)])
            .collect();
        let got = match igd(&front, &reference, &ctx) {
            Ok(v) => v,
            Err(e) => return SuiteResult::fail(NAME, format!("case {case}: error: {e}")),
        };
        // Independent derivation, written directly from the definition.
        let front_n: Vec<[f64; 2]> = front.iter().map(|p| ctx.normalize(p)).collect();
        let mut total = 0.0;
        for r in &reference {
            let rn = ctx.normalize(r);
            let mut best = f64::INFINITY;
            for p in &front_n {
                let d = ((p[0] - rn[0]).powi(2) + (p[1] - rn[1]).powi(2)).sqrt();
                best = best.min(d);
            }
            total += best;
        }
        let expected = total / reference.len() as f64;
        if (got - expected).abs() > 1e-12 {
            return SuiteResult::fail(
                NAME,
                format!("case {case}: got {got}, oracle {expected}"),
            );
        }
    }
    SuiteResult::pass(NAME, format!("{cases}/{cases} random set pairs within 1e-12"))
}

/// Per-variable population variance vs a two-pass oracle (mean first, then
/// squared deviations), tolerance 1e-12.
pub fn variance_suite() -> SuiteResult {
    const NAME: &str = "variance-two-pass";
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let cases = 100;
    for case in 0..cases {
        let size = rng.gen_range(2..=30);
        let dim = rng.gen_range(1..=20);
        let members: Vec<Individual> = (0..size)
            .map(|_| Individual::new((0..dim).map(|_| rng.gen_range(-5.0..5.0)).collect()))
            .collect();
        let pop = Population::new(members);
        let got = match variance_vector(&pop) {
            Ok(v) => v,
            Err(e) => return SuiteResult::fail(NAME, format!("case {case}: error: {e}")),
        };
        for j in 0..dim {
            let mean = pop.members.iter().map(|m| m.x[j]).sum::<f64>() / size as f64;
            let expected = pop
                .members
                .iter()
                .map(|m| (m.x[j] - mean).powi(2))
                .sum::<f64>()
                / size as f64;
            if (got[j] - expected).abs() > 1e-12 {
                return SuiteResult::fail(
                    NAME,
                    format!("case {case} var {j}: got {}, oracle {expected}", got[j]),
                );
            }
        }
    }
    SuiteResult::pass(NAME, format!("{cases}/{cases} populations within 1e-12"))
}

/// Objective model vs an independent re-implementation on random power
/// vectors (relative 1e-12), plus strict per-sensor monotonicity of the
/// delay/energy trade-off on a dense grid.
pub fn mcs_model_suite() -> SuiteResult {
    const NAME: &str = "mcs-dual-implementation";
    use moea_core::problems::Problem;

    let config = McsConfig {
        n: 30,
        ..McsConfig::default()
    };
    let instance = match McsInstance::generate(config.clone(), &mut ChaCha8Rng::seed_from_u64(606))
    {
        Ok(i) => i,
        Err(e) => return SuiteResult::fail(NAME, format!("instance generation: {e}")),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(607);
    let cases = 200;
    for case in 0..cases {
        let p: Vec<f64> = (0..30)
            .map(|_| rng.gen_range(config.p_lo..=config.p_hi))
            .collect();
        let got = match instance.evaluate(&p) {
            Ok(f) => f,
            Err(e) => return SuiteResult::fail(NAME, format!("case {case}: error: {e}")),
        };
        // Independent formula via natural logarithms.
        let mut delay = 0.0;
        let mut energy = 0.0;
        for i in 0..30 {
            let snr = p[i] * instance.gains()[i] / config.noise_w;
            let rate = config.bandwidth_hz * (1.0 + snr).ln() / std::f64::consts::LN_2;
            delay += config.data_bits / rate;
            energy += p[i] * config.data_bits / rate;
        }
        if (got[0] - delay).abs() > 1e-12 * delay || (got[1] - energy).abs() > 1e-12 * energy {
            return SuiteResult::fail(
                NAME,
                format!("case {case}: got {got:?}, oracle [{delay}, {energy}]"),
            );
        }
    }

    // Monotonicity: delay strictly falls and energy strictly rises with power
    // for every sensor on a 10^3-point grid.
    let grid_config = McsConfig {
        n: 20,
        ..McsConfig::default()
    };
    let grid_instance =
        match McsInstance::generate(grid_config.clone(), &mut ChaCha8Rng::seed_from_u64(608)) {
            Ok(i) => i,
            Err(e) => return SuiteResult::fail(NAME, format!("grid instance: {e}")),
        };
    for sensor in 0..20 {
        let mut prev_delay = f64::INFINITY;
        let mut prev_energy = 0.0;
        for step in 1..=1000 {
            let p = grid_config.p_lo
                + (grid_config.p_hi - grid_config.p_lo) * step as f64 / 1000.0;
            let d = grid_instance.sensor_delay(sensor, p);
            let e = grid_instance.sensor_energy(sensor, p);
            if d >= prev_delay || e <= prev_energy {
                return SuiteResult::fail(
                    NAME,
                    format!("sensor {sensor} at p={p}: monotonicity violated"),
                );
            }
            prev_delay = d;
            prev_energy = e;
        }
    }
    SuiteResult::pass(
        NAME,
        format!("{cases} random evaluations within 1e-12; 20x1000 grid strictly monotone"),
    )
}

/// Scalarization reference front audits: non-empty, mutually non-dominated,
/// strictly trading along the sorted front, and tight against the delay
/// corner reached as the energy weight vanishes.
pub fn reference_front_suite() -> SuiteResult {
    const NAME: &str = "reference-front-audit";
    let config = McsConfig {
        n: 8,
        ..McsConfig::default()
    };
    let instance = match McsInstance::generate(config.clone(), &mut ChaCha8Rng::seed_from_u64(707))
    {
        Ok(i) => i,
        Err(e) => return SuiteResult::fail(NAME, format!("instance generation: {e}")),
    };
    let front = match mcs_reference_front(&instance, 60) {
        Ok(f) => f,
        Err(e) => return SuiteResult::fail(NAME, format!("front construction: {e}")),
    };
    if front.len() < 2 {
        return SuiteResult::fail(NAME, format!("front has only {} points", front.len()));
    }
    for (i, a) in front.iter().enumerate() {
        for (j, b) in front.iter().enumerate() {
            if i != j && dominated_by(a, b) {
                return SuiteResult::fail(NAME, format!("point {j} dominates point {i}"));
            }
        }
    }
    for pair in front.windows(2) {
        if !(pair[0][0] < pair[1][0] && pair[0][1] > pair[1][1]) {
            return SuiteResult::fail(
                NAME,
                format!("sorted front not strictly trading at {pair:?}"),
            );
        }
    }
    let delay_floor: f64 = (0..8).map(|i| instance.sensor_delay(i, config.p_hi)).sum();
    let best_delay = front.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    if (best_delay - delay_floor) / delay_floor > 1e-3 {
        return SuiteResult::fail(
            NAME,
            format!("best delay {best_delay} misses the full-power corner {delay_floor}"),
        );
    }
    SuiteResult::pass(
        NAME,
        format!(
            "{} points: mutually non-dominated, strict trade-off, corner-tight",
            front.len()
        ),
    )
}
