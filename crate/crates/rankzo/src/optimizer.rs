//! The optimizer engine: direction sampling, quartile-weighted descent
//! direction, step-size schedules, parameter formulas, and the main
//! iteration loop.
//!
//! One iteration: draw a single noise realization, sample `N` standard
//! Gaussian directions, ask the rank oracle for the ascending ordering of
//! the perturbed values, then step along
//! `d_t = (4/N) * sum(best quartile) - (4/N) * sum(worst quartile)`.

use crate::error::{Error, Result};
use crate::oracle::{ledger_total, rank_oracle, QueryLedger, Ranking};
use crate::problems::StochasticProblem;
use crate::vecops;
use rand::RngCore;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Step-size rule. The scheduler only ever sees the iteration counter and,
/// in oracle-assisted mode, the stochastic gradient norm supplied by the
/// harness.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum StepRule {
    /// `eta_t = 1/(2 mu t)`, times the gradient norm in oracle-assisted mode.
    StronglyConvex { mu: f64 },
    /// Constant `eta_hat` chosen for a fixed horizon, times the gradient
    /// norm in oracle-assisted mode.
    FixedHorizon { eta_hat: f64 },
    /// Plain constant step.
    Constant { eta: f64 },
}

/// A step rule plus the oracle-assisted flag.
///
/// With `gradient_norm_scaling` on, the per-iteration step is multiplied by
/// the stochastic gradient norm at the current iterate. A rank-only oracle
/// cannot observe that norm, so this mode exists for theory reproduction on
/// synthetic problems that expose their gradients; turn it off for honest
/// black-box operation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StepSchedule {
    pub rule: StepRule,
    pub gradient_norm_scaling: bool,
}

impl StepSchedule {
    pub fn validate(&self) -> Result<()> {
        let rate = match self.rule {
            StepRule::StronglyConvex { mu } => mu,
            StepRule::FixedHorizon { eta_hat } => eta_hat,
            StepRule::Constant { eta } => eta,
        };
        if rate <= 0.0 {
            return Err(Error::Domain(format!(
                "step rule parameter must be positive, got {rate}"
            )));
        }
        Ok(())
    }
}

/// Evaluates the schedule at iteration `t >= 1`.
///
/// `grad_norm` must be supplied and positive whenever
/// `gradient_norm_scaling` is on; it is ignored otherwise.
pub fn step_size(schedule: &StepSchedule, t: usize, grad_norm: Option<f64>) -> Result<f64> {
    schedule.validate()?;
    if t < 1 {
        return Err(Error::Domain("iteration index starts at 1".into()));
    }
    let scale = if schedule.gradient_norm_scaling {
        match grad_norm {
            Some(g) if g > 0.0 => g,
            Some(g) => {
                return Err(Error::Config(format!(
                    "gradient norm must be positive with scaling on, got {g}"
                )))
            }
            None => {
                return Err(Error::Config(
                    "gradient norm required when gradient_norm_scaling is on".into(),
                ))
            }
        }
    } else {
        1.0
    };
    let base = match schedule.rule {
        StepRule::StronglyConvex { mu } => 1.0 / (2.0 * mu * t as f64),
        StepRule::FixedHorizon { eta_hat } => eta_hat,
        StepRule::Constant { eta } => eta,
    };
    Ok(base * scale)
}

/// Full optimizer configuration.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OptimizerConfig {
    /// Problem dimension d.
    pub dim: usize,
    /// Directions per iteration N; must be a positive multiple of 4.
    pub sample_size: usize,
    /// Iteration count T.
    pub horizon: usize,
    /// Smoothing parameter alpha (> 0).
    pub alpha: f64,
    pub schedule: StepSchedule,
    pub seed: u64,
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::Config("dim must be >= 1".into()));
        }
        if self.sample_size < 4 || self.sample_size % 4 != 0 {
            return Err(Error::Config(format!(
                "sample_size must be a multiple of 4 and >= 4, got {}",
                self.sample_size
            )));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::Config(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        self.schedule.validate()
    }
}

/// The dimension-plus-noise constant `d + 2 ln(1/delta)` that controls the
/// high-probability direction-norm bounds.
pub fn c_d_delta(d: usize, delta: f64) -> Result<f64> {
    if d < 1 {
        return Err(Error::Domain("d must be >= 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta must be in (0,1), got {delta}")));
    }
    Ok(d as f64 + 2.0 * (1.0 / delta).ln())
}

/// Largest permitted smoothing parameter, `g_lower / (2 c_d_delta L)`.
pub fn smoothing_parameter(g_lower: f64, l: f64, c_d_delta: f64) -> Result<f64> {
    if g_lower <= 0.0 || l <= 0.0 || c_d_delta <= 0.0 {
        return Err(Error::Domain(
            "smoothing_parameter requires strictly positive inputs".into(),
        ));
    }
    Ok(g_lower / (2.0 * c_d_delta * l))
}

/// Sample size sufficient for horizon `T` at per-direction tail mass `p`:
/// `ceil(ln(40 T) / K(1/4 || p))`, rounded up to the next multiple of 4.
pub fn recommended_sample_size(horizon: usize, p: f64) -> Result<usize> {
    if horizon < 1 {
        return Err(Error::Domain("horizon must be >= 1".into()));
    }
    if !(p > 0.0 && p < 0.25) {
        return Err(Error::Domain(format!("p must be in (0, 1/4), got {p}")));
    }
    let k = crate::verify::kl_binary(0.25, p)?;
    let raw = ((40.0 * horizon as f64).ln() / k).ceil() as usize;
    Ok(raw.div_ceil(4) * 4)
}

/// Fixed-horizon step `sqrt(N / (T L C)) * sqrt(gap1) / G_u`, where `gap1`
/// is the initial optimality gap and `C = c_d_delta(d, delta)`.
pub fn fixed_horizon_eta(
    sample_size: usize,
    horizon: usize,
    l: f64,
    c_d_delta: f64,
    initial_gap: f64,
    g_upper: f64,
) -> Result<f64> {
    if sample_size == 0 || horizon == 0 {
        return Err(Error::Domain("sample_size and horizon must be >= 1".into()));
    }
    if l <= 0.0 || c_d_delta <= 0.0 || initial_gap <= 0.0 || g_upper <= 0.0 {
        return Err(Error::Domain(
            "fixed_horizon_eta requires strictly positive constants".into(),
        ));
    }
    Ok((sample_size as f64 / (horizon as f64 * l * c_d_delta)).sqrt() * initial_gap.sqrt()
        / g_upper)
}

/// The N Gaussian perturbation directions of one iteration.
#[derive(Debug, Clone)]
pub struct DirectionSet {
    directions: Vec<Vec<f64>>,
    iteration: usize,
}

impl DirectionSet {
    /// Wraps explicit directions (used by tests and the verification suite).
    pub fn from_vectors(directions: Vec<Vec<f64>>, iteration: usize) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::Integrity("direction set must be nonempty".into()));
        }
        let d = directions[0].len();
        for u in &directions {
            if u.len() != d {
                return Err(Error::Integrity("directions have mixed dimensions".into()));
            }
            if u.iter().any(|v| !v.is_finite()) {
                return Err(Error::Integrity("directions must be finite".into()));
            }
        }
        Ok(DirectionSet {
            directions,
            iteration,
        })
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.directions[0].len()
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn get(&self, i: usize) -> &[f64] {
        &self.directions[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.directions.iter().map(|v| v.as_slice())
    }
}

/// Draws `n` i.i.d. standard Gaussian `d`-vectors from the given stream.
pub fn sample_directions(
    rng: &mut dyn RngCore,
    n: usize,
    d: usize,
    iteration: usize,
) -> Result<DirectionSet> {
    if n < 4 || n % 4 != 0 {
        return Err(Error::Config(format!(
            "sample size must be a multiple of 4 and >= 4, got {n}"
        )));
    }
    if d < 1 {
        return Err(Error::Config("dimension must be >= 1".into()));
    }
    let directions = (0..n)
        .map(|_| (0..d).map(|_| StandardNormal.sample(rng)).collect())
        .collect();
    Ok(DirectionSet {
        directions,
        iteration,
    })
}

/// The quartile-weighted recombination of one iteration's directions.
#[derive(Debug, Clone, PartialEq)]
pub struct DescentDirection {
    vector: Vec<f64>,
}

impl DescentDirection {
    pub fn vector(&self) -> &[f64] {
        &self.vector
    }
}

/// `(4/N) * sum of the first N/4 ranked directions minus (4/N) * sum of the
/// last N/4`. The implicit weight vector has N/4 entries `4/N`, N/4 entries
/// `-4/N`, and N/2 zeros, so the positive and negative weights each sum to
/// one in magnitude.
pub fn build_descent_direction(dirs: &DirectionSet, ranking: &Ranking) -> Result<DescentDirection> {
    let n = dirs.len();
    if ranking.len() != n {
        return Err(Error::Integrity(format!(
            "ranking length {} does not match direction count {n}",
            ranking.len()
        )));
    }
    if n % 4 != 0 {
        return Err(Error::Config(format!(
            "direction count must be a multiple of 4, got {n}"
        )));
    }
    let quarter = n / 4;
    let w = 4.0 / n as f64;
    // Sum each quartile separately, in ascending direction-index order, and
    // combine with a single subtraction per component. The result then
    // depends only on the quartile *sets*, so reversing the ranking negates
    // the output bitwise (floating-point rounding is sign-symmetric).
    let mut best: Vec<usize> = ranking.order()[..quarter].to_vec();
    let mut worst: Vec<usize> = ranking.order()[n - quarter..].to_vec();
    best.sort_unstable();
    worst.sort_unstable();
    let mut best_sum = vec![0.0; dirs.dim()];
    let mut worst_sum = vec![0.0; dirs.dim()];
    for &i in &best {
        vecops::add_scaled(&mut best_sum, 1.0, dirs.get(i));
    }
    for &i in &worst {
        vecops::add_scaled(&mut worst_sum, 1.0, dirs.get(i));
    }
    let vector: Vec<f64> = best_sum
        .iter()
        .zip(&worst_sum)
        .map(|(b, v)| w * b - w * v)
        .collect();
    if vector.iter().any(|v| !v.is_finite()) {
        return Err(Error::Integrity("descent direction is non-finite".into()));
    }
    Ok(DescentDirection { vector })
}

/// One row of a run trace, logged per iteration before the update.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TraceRecord {
    /// Iteration index, starting at 1.
    pub t: usize,
    /// `f(x_t) - f*` (true objective).
    pub f_gap: f64,
    /// `|grad f(x_t)|^2` (true gradient).
    pub grad_sq: f64,
    /// Cumulative oracle evaluations, exactly `N * t`.
    pub queries: u64,
    /// Step size used at this iteration.
    pub eta: f64,
}

/// Full record of one optimizer run.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RunTrace {
    pub records: Vec<TraceRecord>,
    pub final_point: Vec<f64>,
    /// How many iterates left the problem's certification region. The
    /// constants are only certified inside the region, so exits are logged
    /// but not fatal.
    pub region_exits: usize,
}

/// Runs the optimizer for `config.horizon` iterations from `x1`.
///
/// Per iteration: one noise draw shared by all `N` evaluations, one rank
/// oracle call, one quartile-recombination step. Fully deterministic given
/// the seed. A non-finite function value aborts the run with an error
/// naming the offending direction and iteration.
pub fn run(
    problem: &dyn StochasticProblem,
    config: &OptimizerConfig,
    x1: &[f64],
) -> Result<RunTrace> {
    config.validate()?;
    if config.dim != problem.dim() || x1.len() != problem.dim() {
        return Err(Error::Config(format!(
            "dimension mismatch: problem {}, config {}, x1 {}",
            problem.dim(),
            config.dim,
            x1.len()
        )));
    }
    if x1.iter().any(|v| !v.is_finite()) {
        return Err(Error::Config("x1 must be finite".into()));
    }

    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(config.seed);
    let mut ledger = QueryLedger::new();
    let mut x = x1.to_vec();
    let mut records = Vec::with_capacity(config.horizon);
    let mut region_exits = 0usize;
    let region_radius = problem.constants().region_radius;

    for t in 1..=config.horizon {
        let xi = problem.sample_noise(&mut rng);
        let dirs = sample_directions(&mut rng, config.sample_size, config.dim, t)?;
        let ranking = rank_oracle(problem, &x, &dirs, config.alpha, &xi, &mut ledger)?;
        let direction = build_descent_direction(&dirs, &ranking)?;

        let grad_norm = if config.schedule.gradient_norm_scaling {
            Some(vecops::norm(&problem.grad_stoch(&x, &xi)))
        } else {
            None
        };
        let eta = step_size(&config.schedule, t, grad_norm)?;

        let grad_true = problem.grad_true(&x);
        records.push(TraceRecord {
            t,
            f_gap: problem.eval_true(&x) - problem.f_star(),
            grad_sq: vecops::norm_sq(&grad_true),
            queries: ledger_total(&ledger),
            eta,
        });

        vecops::add_scaled(&mut x, eta, direction.vector());
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: 0, iteration: t });
        }
        let dist: f64 = x
            .iter()
            .zip(problem.optimum())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if dist > region_radius {
            region_exits += 1;
        }
    }

    Ok(RunTrace {
        records,
        final_point: x,
        region_exits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_quadratic, NoiseSpec};
    use rand::SeedableRng;

    fn schedule_off(rule: StepRule) -> StepSchedule {
        StepSchedule {
            rule,
            gradient_norm_scaling: false,
        }
    }

    #[test]
    fn c_d_delta_values() {
        assert!((c_d_delta(100, 0.01).unwrap() - 109.21034037197618).abs() < 1e-9);
        assert!((c_d_delta(1, (-1.0f64).exp()).unwrap() - 3.0).abs() < 1e-12);
        // delta -> 1 limit: the log term vanishes.
        assert!((c_d_delta(10, 0.999_999).unwrap() - 10.0).abs() < 1e-4);
        assert!(c_d_delta(10, 0.0).is_err());
        assert!(c_d_delta(10, 1.0).is_err());
        assert!(c_d_delta(0, 0.5).is_err());
        // Monotone in d and in 1/delta.
        assert!(c_d_delta(20, 0.1).unwrap() > c_d_delta(10, 0.1).unwrap());
        assert!(c_d_delta(10, 0.01).unwrap() > c_d_delta(10, 0.1).unwrap());
    }

    #[test]
    fn smoothing_parameter_values() {
        assert!((smoothing_parameter(1.0, 1.0, 10.0).unwrap() - 0.05).abs() < 1e-15);
        assert!((smoothing_parameter(2.0, 2.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        // Vanishes as L grows.
        assert!(smoothing_parameter(1.0, 1e12, 10.0).unwrap() < 1e-12);
        assert!(smoothing_parameter(0.0, 1.0, 1.0).is_err());
        assert!(smoothing_parameter(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn recommended_sample_size_values() {
        assert_eq!(recommended_sample_size(1000, 0.0224).unwrap(), 28);
        assert_eq!(recommended_sample_size(1, 0.0224).unwrap(), 12);
        for t in [1usize, 7, 100, 5000, 123456] {
            assert_eq!(recommended_sample_size(t, 0.1).unwrap() % 4, 0);
        }
        assert!(recommended_sample_size(10, 0.25).is_err());
        assert!(recommended_sample_size(10, 0.0).is_err());
        assert!(recommended_sample_size(0, 0.1).is_err());
    }

    #[test]
    fn step_size_values() {
        let sc = StepSchedule {
            rule: StepRule::StronglyConvex { mu: 1.0 },
            gradient_norm_scaling: true,
        };
        assert!((step_size(&sc, 2, Some(3.0)).unwrap() - 0.75).abs() < 1e-15);
        let constant = schedule_off(StepRule::Constant { eta: 0.1 });
        assert!((step_size(&constant, 1, None).unwrap() - 0.1).abs() < 1e-15);
        assert!((step_size(&constant, 9999, None).unwrap() - 0.1).abs() < 1e-15);
        let fh = StepSchedule {
            rule: StepRule::FixedHorizon { eta_hat: 0.2 },
            gradient_norm_scaling: true,
        };
        assert!((step_size(&fh, 3, Some(5.0)).unwrap() - 1.0).abs() < 1e-15);
        // Missing or nonpositive gradient norm with scaling on.
        assert!(step_size(&sc, 1, None).is_err());
        assert!(step_size(&sc, 1, Some(0.0)).is_err());
        assert!(step_size(&sc, 0, Some(1.0)).is_err());
    }

    #[test]
    fn fixed_horizon_eta_substitution() {
        // sqrt(32 / (100 * 2 * 16)) * sqrt(4) / 5 = 0.1 * 2 / 5 = 0.04
        let eta = fixed_horizon_eta(32, 100, 2.0, 16.0, 4.0, 5.0).unwrap();
        assert!((eta - 0.04).abs() < 1e-15);
        assert!(fixed_horizon_eta(32, 100, 0.0, 16.0, 4.0, 5.0).is_err());
    }

    #[test]
    fn sample_directions_deterministic() {
        let mut r1 = ChaCha8Rng::seed_from_u64(99);
        let mut r2 = ChaCha8Rng::seed_from_u64(99);
        let a = sample_directions(&mut r1, 8, 3, 1).unwrap();
        let b = sample_directions(&mut r2, 8, 3, 1).unwrap();
        for i in 0..8 {
            assert_eq!(a.get(i), b.get(i));
        }
        assert!(sample_directions(&mut r1, 6, 3, 1).is_err());
        assert!(sample_directions(&mut r1, 8, 0, 1).is_err());
    }

    #[test]
    fn sample_directions_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let dirs = sample_directions(&mut rng, 1024, 64, 1).unwrap();
        let entries: Vec<f64> = dirs.iter().flatten().copied().collect();
        let n = entries.len() as f64;
        let mean = entries.iter().sum::<f64>() / n;
        assert!(mean.abs() < 4.0 / n.sqrt(), "mean {mean}");
        let var = entries.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        assert!((var - 1.0).abs() < 0.05, "variance {var}");
    }

    #[test]
    fn descent_direction_hand_example() {
        let dirs = DirectionSet::from_vectors(
            vec![
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![-1.0, 0.0],
                vec![0.0, -1.0],
            ],
            1,
        )
        .unwrap();
        // Ascending order: u2 best, u3 worst (0-based indices 1 and 2).
        let ranking = Ranking::from_order(vec![1, 0, 3, 2], 1).unwrap();
        let d = build_descent_direction(&dirs, &ranking).unwrap();
        assert_eq!(d.vector(), &[1.0, 1.0]);
    }

    #[test]
    fn descent_direction_identical_vectors_cancel() {
        let v = vec![0.3, -1.2, 0.7];
        let dirs = DirectionSet::from_vectors(vec![v; 8], 1).unwrap();
        let ranking = Ranking::from_order((0..8).collect(), 1).unwrap();
        let d = build_descent_direction(&dirs, &ranking).unwrap();
        for &x in d.vector() {
            assert_eq!(x, 0.0);
        }
    }

    #[test]
    fn descent_direction_reversed_ranking_negates() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let dirs = sample_directions(&mut rng, 16, 5, 1).unwrap();
        let ranking = Ranking::from_order(vec![4, 9, 0, 15, 2, 7, 11, 3, 13, 1, 6, 10, 5, 12, 8, 14], 1).unwrap();
        let d = build_descent_direction(&dirs, &ranking).unwrap();
        let neg = build_descent_direction(&dirs, &ranking.reversed()).unwrap();
        for (a, b) in d.vector().iter().zip(neg.vector()) {
            assert_eq!(*a, -*b);
        }
    }

    #[test]
    fn descent_direction_rejects_mismatched_ranking() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let dirs = sample_directions(&mut rng, 8, 2, 1).unwrap();
        let ranking = Ranking::from_order(vec![0, 1, 2, 3], 1).unwrap();
        assert!(build_descent_direction(&dirs, &ranking).is_err());
    }

    #[test]
    fn run_zero_horizon_is_identity() {
        let problem =
            make_quadratic(2, 1.0, 1.0, NoiseSpec::SphereLinear { radius: 0.0 }, 1.0).unwrap();
        let config = OptimizerConfig {
            dim: 2,
            sample_size: 8,
            horizon: 0,
            alpha: 0.1,
            schedule: schedule_off(StepRule::Constant { eta: 0.05 }),
            seed: 1,
        };
        let trace = run(&problem, &config, &[0.4, -0.2]).unwrap();
        assert!(trace.records.is_empty());
        assert_eq!(trace.final_point, vec![0.4, -0.2]);
    }

    #[test]
    fn run_noiseless_quadratic_decreases() {
        let problem =
            make_quadratic(2, 1.0, 1.0, NoiseSpec::SphereLinear { radius: 0.0 }, 2.0).unwrap();
        let config = OptimizerConfig {
            dim: 2,
            sample_size: 8,
            horizon: 200,
            alpha: 0.1,
            schedule: schedule_off(StepRule::Constant { eta: 0.05 }),
            seed: 42,
        };
        let x1 = [1.0, -1.0];
        let trace = run(&problem, &config, &x1).unwrap();
        let first = trace.records.first().unwrap().f_gap;
        let final_gap = problem.eval_true(&trace.final_point) - problem.f_star();
        assert!(final_gap < first, "final {final_gap} vs initial {first}");
        // Every step size is positive and queries follow N*t exactly.
        for r in &trace.records {
            assert!(r.eta > 0.0);
            assert_eq!(r.queries, 8 * r.t as u64);
        }
    }

    #[test]
    fn run_query_accounting() {
        let problem =
            make_quadratic(3, 1.0, 2.0, NoiseSpec::SphereLinear { radius: 5.0 }, 1.0).unwrap();
        let config = OptimizerConfig {
            dim: 3,
            sample_size: 16,
            horizon: 40,
            alpha: 0.05,
            schedule: schedule_off(StepRule::StronglyConvex { mu: 1.0 }),
            seed: 5,
        };
        let trace = run(&problem, &config, &[0.5, 0.0, -0.5]).unwrap();
        assert_eq!(trace.records[36].t, 37);
        assert_eq!(trace.records[36].queries, 592);
    }

    #[test]
    fn run_is_deterministic() {
        let problem =
            make_quadratic(4, 1.0, 3.0, NoiseSpec::SphereLinear { radius: 4.0 }, 1.0).unwrap();
        let config = OptimizerConfig {
            dim: 4,
            sample_size: 8,
            horizon: 60,
            alpha: 0.02,
            schedule: StepSchedule {
                rule: StepRule::StronglyConvex { mu: 1.0 },
                gradient_norm_scaling: true,
            },
            seed: 11,
        };
        let x1 = [0.3, -0.3, 0.1, 0.9];
        let a = run(&problem, &config, &x1).unwrap();
        let b = run(&problem, &config, &x1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn run_rejects_bad_config() {
        let problem =
            make_quadratic(2, 1.0, 1.0, NoiseSpec::SphereLinear { radius: 0.0 }, 1.0).unwrap();
        let mut config = OptimizerConfig {
            dim: 2,
            sample_size: 8,
            horizon: 10,
            alpha: 0.1,
            schedule: schedule_off(StepRule::Constant { eta: 0.05 }),
            seed: 1,
        };
        config.sample_size = 10; // not a multiple of 4
        assert!(run(&problem, &config, &[0.0, 0.0]).is_err());
        config.sample_size = 8;
        config.dim = 3; // mismatch
        assert!(run(&problem, &config, &[0.0, 0.0]).is_err());
    }
}
