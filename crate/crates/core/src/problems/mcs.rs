use super::Problem;
use crate::error::{Error, Result};
use crate::evo::{dominates, Bounds};
use rand::Rng;

/// How per-sensor transmission delays combine into the delay objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DelayAggregation {
    /// Total airtime across sensors: orthogonal channels billed additively.
    #[default]
    Sum,
    /// Completion time of the slowest sensor (fully parallel uploads).
    Max,
}

/// Physical configuration of a UAV data-collection scenario: ground sensors
/// scattered in a square field transmit fixed payloads to a hovering UAV over
/// orthogonal channels. Decision variables are the per-sensor transmit powers;
/// objectives are total transmission delay and total transmission energy.
#[derive(Debug, Clone, PartialEq)]
pub struct McsConfig {
    /// Number of ground sensors (one transmit power per sensor).
    pub n: usize,
    /// Side length of the square deployment field (m).
    pub field_m: f64,
    /// UAV hover altitude above the field center (m).
    pub altitude_m: f64,
    /// Reference channel gain at 1 m.
    pub g0: f64,
    /// Path-loss exponent.
    pub alpha: f64,
    /// Per-sensor orthogonal bandwidth (Hz).
    pub bandwidth_hz: f64,
    /// Receiver noise power (W).
    pub noise_w: f64,
    /// Per-sensor payload (bits).
    pub data_bits: f64,
    /// Transmit-power bounds (W).
    pub p_lo: f64,
    pub p_hi: f64,
    /// Delay-objective aggregation rule.
    pub delay_aggregation: DelayAggregation,
}

impl Default for McsConfig {
    fn default() -> Self {
        Self {
            n: 300,
            field_m: 1000.0,
            altitude_m: 100.0,
            g0: 1e-3,
            alpha: 2.0,
            bandwidth_hz: 1e6,
            noise_w: 1e-13,
            data_bits: 5e6,
            p_lo: 0.001,
            p_hi: 1.0,
            delay_aggregation: DelayAggregation::Sum,
        }
    }
}

impl McsConfig {
    fn validate(&self) -> Result<()> {
        let positive = [
            ("field_m", self.field_m),
            ("altitude_m", self.altitude_m),
            ("g0", self.g0),
            ("alpha", self.alpha),
            ("bandwidth_hz", self.bandwidth_hz),
            ("noise_w", self.noise_w),
            ("data_bits", self.data_bits),
            ("p_lo", self.p_lo),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if self.n == 0 {
            return Err(Error::InvalidConfig("sensor count must be positive".into()));
        }
        if !(self.p_lo < self.p_hi) {
            return Err(Error::InvalidConfig(format!(
                "power bounds must satisfy p_lo < p_hi, got [{}, {}]",
                self.p_lo, self.p_hi
            )));
        }
        Ok(())
    }
}

/// A concrete sensor deployment: per-sensor channel gains plus the link
/// parameters needed to evaluate power vectors. Immutable after construction.
#[derive(Debug, Clone)]
pub struct McsInstance {
    gain: Vec<f64>,
    data_bits: f64,
    bandwidth_hz: f64,
    noise_w: f64,
    bounds: Bounds,
    config: McsConfig,
}

impl McsInstance {
    /// Places `config.n` sensors uniformly in the field, with the UAV hovering
    /// over the field center, and derives line-of-sight path-loss gains
    /// `g0 / dist^alpha`.
    pub fn generate<R: Rng>(config: McsConfig, rng: &mut R) -> Result<Self> {
        config.validate()?;
        let cx = config.field_m / 2.0;
        let cy = config.field_m / 2.0;
        let gain = (0..config.n)
            .map(|_| {
                let x = rng.gen_range(0.0..config.field_m);
                let y = rng.gen_range(0.0..config.field_m);
                let dist =
                    ((x - cx).powi(2) + (y - cy).powi(2) + config.altitude_m.powi(2)).sqrt();
                config.g0 / dist.powf(config.alpha)
            })
            .collect();
        Self::from_gains(gain, config)
    }

    /// Builds an instance from explicit channel gains (used by tests and by
    /// the deterministic single-sensor examples).
    pub fn from_gains(gain: Vec<f64>, config: McsConfig) -> Result<Self> {
        config.validate()?;
        if gain.len() != config.n {
            return Err(Error::InvalidConfig(format!(
                "expected {} gains, got {}",
                config.n,
                gain.len()
            )));
        }
        if gain.iter().any(|&g| !(g > 0.0)) {
            return Err(Error::InvalidConfig("all channel gains must be positive".into()));
        }
        let bounds = Bounds::new(vec![config.p_lo; config.n], vec![config.p_hi; config.n])?;
        Ok(Self {
            gain,
            data_bits: config.data_bits,
            bandwidth_hz: config.bandwidth_hz,
            noise_w: config.noise_w,
            bounds,
            config,
        })
    }

    pub fn gains(&self) -> &[f64] {
        &self.gain
    }

    pub fn config(&self) -> &McsConfig {
        &self.config
    }

    /// Shannon rate of sensor `i` at transmit power `p` (bit/s).
    fn rate(&self, i: usize, p: f64) -> f64 {
        self.bandwidth_hz * (1.0 + p * self.gain[i] / self.noise_w).log2()
    }

    /// Per-sensor transmission delay `S / r_i(p)` (s).
    pub fn sensor_delay(&self, i: usize, p: f64) -> f64 {
        self.data_bits / self.rate(i, p)
    }

    /// Per-sensor transmission energy `p * S / r_i(p)` (J).
    pub fn sensor_energy(&self, i: usize, p: f64) -> f64 {
        p * self.sensor_delay(i, p)
    }
}

impl Problem for McsInstance {
    fn dim(&self) -> usize {
        self.gain.len()
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    /// Delay and total energy of a power vector: `energy = sum_i p_i*S/r_i`,
    /// and delay is either `sum_i S/r_i` or `max_i S/r_i` depending on the
    /// configured [`DelayAggregation`].
    fn evaluate(&self, p: &[f64]) -> Result<Vec<f64>> {
        if !self.bounds.contains(p) {
            return Err(Error::InvalidArgument(
                "power vector outside transmit-power bounds".into(),
            ));
        }
        let mut delay = 0.0;
        let mut energy = 0.0;
        for (i, &pi) in p.iter().enumerate() {
            let t = self.sensor_delay(i, pi);
            delay = match self.config.delay_aggregation {
                DelayAggregation::Sum => delay + t,
                DelayAggregation::Max => delay.max(t),
            };
            energy += pi * t;
        }
        Ok(vec![delay, energy])
    }

    fn name(&self) -> &str {
        "mcs"
    }
}

/// Golden-section search for the minimum of a unimodal function on [lo, hi].
fn golden_section_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - (b - a) * INV_PHI;
    let mut d = a + (b - a) * INV_PHI;
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * INV_PHI;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * INV_PHI;
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// Reference Pareto front for an instance, via weighted-sum scalarization.
///
/// The objectives separate per sensor, so every scalarization
/// `w*energy~ + (1-w)*delay~` (objectives normalized by their box-extreme
/// ranges) decomposes into `n` independent 1-D minimizations over
/// `[p_lo, p_hi]`, each solved by golden-section search to 1e-9 W. The
/// returned objective vectors `(delay, energy)` are the non-dominated subset
/// of the swept scalarization optima, sorted by delay.
pub fn mcs_reference_front(inst: &McsInstance, weights: usize) -> Result<Vec<Vec<f64>>> {
    if weights < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 scalarization weights, got {weights}"
        )));
    }
    if inst.config.delay_aggregation != DelayAggregation::Sum {
        return Err(Error::InvalidConfig(
            "reference-front construction needs sum-delay aggregation; \
             a max over sensors does not decompose into per-sensor minimizations"
                .into(),
        ));
    }
    let n = inst.dim();
    let (p_lo, p_hi) = (inst.config.p_lo, inst.config.p_hi);

    // Box extremes: delay is decreasing and energy increasing in each power,
    // so the corners of the box span both objective ranges.
    let delay_min: f64 = (0..n).map(|i| inst.sensor_delay(i, p_hi)).sum();
    let delay_max: f64 = (0..n).map(|i| inst.sensor_delay(i, p_lo)).sum();
    let energy_min: f64 = (0..n).map(|i| inst.sensor_energy(i, p_lo)).sum();
    let energy_max: f64 = (0..n).map(|i| inst.sensor_energy(i, p_hi)).sum();
    let delay_range = (delay_max - delay_min).max(f64::MIN_POSITIVE);
    let energy_range = (energy_max - energy_min).max(f64::MIN_POSITIVE);

    let mut points: Vec<Vec<f64>> = Vec::with_capacity(weights);
    for t in 1..=weights {
        let w = t as f64 / (weights as f64 + 1.0);
        let mut delay = 0.0;
        let mut energy = 0.0;
        for i in 0..n {
            let p_star = golden_section_min(
                |p| {
                    w * inst.sensor_energy(i, p) / energy_range
                        + (1.0 - w) * inst.sensor_delay(i, p) / delay_range
                },
                p_lo,
                p_hi,
                1e-9,
            );
            delay += inst.sensor_delay(i, p_star);
            energy += inst.sensor_energy(i, p_star);
        }
        points.push(vec![delay, energy]);
    }

    let mut front: Vec<Vec<f64>> = points
        .iter()
        .filter(|p| !points.iter().any(|q| dominates(q, p)))
        .cloned()
        .collect();
    front.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
    front.dedup();
    Ok(front)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single_sensor_instance(gain: f64) -> McsInstance {
        let config = McsConfig {
            n: 1,
            bandwidth_hz: 1e6,
            noise_w: 1e-13,
            data_bits: 1e6,
            ..McsConfig::default()
        };
        McsInstance::from_gains(vec![gain], config).unwrap()
    }

    #[test]
    fn gain_under_uav_hand_checked() {
        // Sensor directly below the UAV: dist = 100 m, g0 = 1e-3, alpha = 2
        // gives gain = 1e-3 / 1e4 = 1e-7.
        let config = McsConfig::default();
        let dist: f64 = config.altitude_m;
        let gain = config.g0 / dist.powf(config.alpha);
        assert!((gain - 1e-7).abs() < 1e-20);
    }

    #[test]
    fn generate_same_seed_identical_layout() {
        let config = McsConfig { n: 25, ..McsConfig::default() };
        let a = McsInstance::generate(config.clone(), &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let b = McsInstance::generate(config, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(a.gains(), b.gains());
    }

    #[test]
    fn generate_full_scale_instance() {
        let config = McsConfig::default();
        let inst = McsInstance::generate(config, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(inst.dim(), 300);
        assert!(inst.gains().iter().all(|&g| g > 0.0));
    }

    #[test]
    fn nonpositive_parameter_rejected() {
        let config = McsConfig { noise_w: 0.0, ..McsConfig::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            McsInstance::generate(config, &mut rng),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn evaluate_hand_checked_snr_one() {
        // p*gain/noise = 1 gives r = B*log2(2) = 1e6 bit/s, so a 1e6-bit
        // payload takes exactly 1 s and costs p joules.
        let p = 0.5;
        let inst = single_sensor_instance(1e-13 / p);
        let f = inst.evaluate(&[p]).unwrap();
        assert!((f[0] - 1.0).abs() < 1e-12, "delay {}", f[0]);
        assert!((f[1] - p).abs() < 1e-12, "energy {}", f[1]);
    }

    #[test]
    fn uniform_power_scale_up_reduces_delay() {
        let config = McsConfig { n: 12, ..McsConfig::default() };
        let inst = McsInstance::generate(config, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        let low = inst.evaluate(&vec![0.01; 12]).unwrap();
        let high = inst.evaluate(&vec![0.4; 12]).unwrap();
        assert!(high[0] < low[0]);
    }

    #[test]
    fn evaluate_matches_independent_formula() {
        // Second implementation of the same rate/delay/energy model, written
        // directly from the definitions.
        let config = McsConfig { n: 30, ..McsConfig::default() };
        let inst = McsInstance::generate(config.clone(), &mut ChaCha8Rng::seed_from_u64(17)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..100 {
            let p: Vec<f64> = (0..30)
                .map(|_| rng.gen_range(config.p_lo..=config.p_hi))
                .collect();
            let got = inst.evaluate(&p).unwrap();
            let mut delay = 0.0;
            let mut energy = 0.0;
            for i in 0..30 {
                let snr = p[i] * inst.gains()[i] / config.noise_w;
                let rate = config.bandwidth_hz * (1.0 + snr).ln() / std::f64::consts::LN_2;
                delay += config.data_bits / rate;
                energy += p[i] * config.data_bits / rate;
            }
            assert!((got[0] - delay).abs() <= 1e-12 * delay.abs());
            assert!((got[1] - energy).abs() <= 1e-12 * energy.abs());
        }
    }

    #[test]
    fn max_delay_aggregation_takes_slowest_sensor() {
        let config = McsConfig {
            n: 2,
            delay_aggregation: DelayAggregation::Max,
            ..McsConfig::default()
        };
        // Second sensor has a 100x weaker channel, so it dominates the
        // completion time at equal power.
        let inst = McsInstance::from_gains(vec![1e-6, 1e-8], config).unwrap();
        let p = [0.2, 0.2];
        let f = inst.evaluate(&p).unwrap();
        let d0 = inst.sensor_delay(0, p[0]);
        let d1 = inst.sensor_delay(1, p[1]);
        assert!(d1 > d0);
        assert!((f[0] - d1).abs() <= 1e-15 * d1);
        // Energy stays the additive total either way.
        let energy = p[0] * d0 + p[1] * d1;
        assert!((f[1] - energy).abs() <= 1e-12 * energy);
    }

    #[test]
    fn reference_front_rejects_max_delay_aggregation() {
        let config = McsConfig {
            n: 3,
            delay_aggregation: DelayAggregation::Max,
            ..McsConfig::default()
        };
        let inst = McsInstance::generate(config, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert!(matches!(
            mcs_reference_front(&inst, 10),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn out_of_bounds_power_rejected() {
        let inst = single_sensor_instance(1e-7);
        assert!(matches!(
            inst.evaluate(&[2.0]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn per_sensor_monotonicity() {
        // Delay strictly decreasing, energy strictly increasing in p.
        let inst = single_sensor_instance(1e-8);
        let mut prev_delay = f64::INFINITY;
        let mut prev_energy = 0.0;
        for k in 1..=1000 {
            let p = 0.001 + (1.0 - 0.001) * k as f64 / 1000.0;
            let d = inst.sensor_delay(0, p);
            let e = inst.sensor_energy(0, p);
            assert!(d < prev_delay);
            assert!(e > prev_energy);
            prev_delay = d;
            prev_energy = e;
        }
    }

    #[test]
    fn reference_front_extreme_weights() {
        let config = McsConfig { n: 10, ..McsConfig::default() };
        let inst = McsInstance::generate(config.clone(), &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let front = mcs_reference_front(&inst, 40).unwrap();
        assert!(front.len() >= 2);

        // Small energy weights drive every sensor to p_hi, the delay-optimal
        // corner, so the front's best delay sits essentially on it.
        let delay_floor: f64 = (0..10).map(|i| inst.sensor_delay(i, config.p_hi)).sum();
        let best_delay = front.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        assert!((best_delay - delay_floor) / delay_floor < 1e-3);

        // Sorted by delay, a non-dominated bi-objective front trades strictly:
        // energy must fall as delay grows.
        for pair in front.windows(2) {
            assert!(pair[0][0] < pair[1][0]);
            assert!(pair[0][1] > pair[1][1]);
        }

        // The all-p_lo corner is the unattained energy infimum: the delay
        // gradient diverges as powers fall, so every finite-weight optimum
        // stays strictly above it.
        let energy_floor: f64 = (0..10).map(|i| inst.sensor_energy(i, config.p_lo)).sum();
        assert!(front.iter().all(|p| p[1] > energy_floor));
    }

    #[test]
    fn golden_section_matches_dense_grid_scan() {
        // The per-sensor scalarized cost is unimodal in p; golden-section
        // minima must match a 10^4-point exhaustive scan.
        let inst = single_sensor_instance(2e-8);
        let (p_lo, p_hi) = (inst.config.p_lo, inst.config.p_hi);
        let d_range = inst.sensor_delay(0, p_lo) - inst.sensor_delay(0, p_hi);
        let e_range = inst.sensor_energy(0, p_hi) - inst.sensor_energy(0, p_lo);
        for w in [0.02, 0.25, 0.5, 0.75, 0.98] {
            let cost = |p: f64| {
                w * inst.sensor_energy(0, p) / e_range
                    + (1.0 - w) * inst.sensor_delay(0, p) / d_range
            };
            let p_star = golden_section_min(cost, p_lo, p_hi, 1e-9);
            let grid_best = (0..=10_000)
                .map(|i| cost(p_lo + (p_hi - p_lo) * i as f64 / 10_000.0))
                .fold(f64::INFINITY, f64::min);
            let found = cost(p_star);
            assert!(
                found <= grid_best + 1e-9 * grid_best.abs(),
                "w={w}: golden-section {found} vs grid {grid_best}"
            );
        }
    }

    #[test]
    fn reference_front_mutually_nondominated() {
        let config = McsConfig { n: 6, ..McsConfig::default() };
        let inst = McsInstance::generate(config, &mut ChaCha8Rng::seed_from_u64(12)).unwrap();
        let front = mcs_reference_front(&inst, 60).unwrap();
        for (i, a) in front.iter().enumerate() {
            for (j, b) in front.iter().enumerate() {
                if i != j {
                    assert!(!dominates(a, b), "{a:?} dominates {b:?}");
                }
            }
        }
    }

    #[test]
    fn reference_front_rejects_single_weight() {
        let config = McsConfig { n: 2, ..McsConfig::default() };
        let inst = McsInstance::generate(config, &mut ChaCha8Rng::seed_from_u64(12)).unwrap();
        assert!(matches!(
            mcs_reference_front(&inst, 1),
            Err(Error::InvalidConfig(_))
        ));
    }
}
