//! Monte Carlo and algebraic verification of the concentration bounds and
//! recursion lemmas the optimizer's convergence analysis rests on.
//!
//! Every check compares an empirical frequency against a closed-form
//! theoretical bound and passes with a 3-sigma binomial tolerance: a lower
//! bound passes when `freq >= bound - 3 se`, an upper bound when
//! `freq <= bound + 3 se`. All bounds are computed from the analysis
//! formulas only — no fitted constants.

use crate::error::{Error, Result};
use crate::optimizer::c_d_delta;
use crate::problems::StochasticProblem;
use crate::vecops;
use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

/// Tail mass used by the analysis for `P(X > 2)`, X standard normal. The
/// exact value is `1 - Phi(2) = 0.0227501...`; the analysis rounds to
/// 0.0224. Both are reported side by side rather than silently correcting
/// one with the other (see [`standard_normal_upper_tail`]).
pub const ANALYSIS_TAIL_P: f64 = 0.0224;

/// Binary Kullback-Leibler divergence
/// `K(q||p) = q ln(q/p) + (1-q) ln((1-q)/(1-p))`.
pub fn kl_binary(q: f64, p: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0 && p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "kl_binary requires q, p strictly inside (0,1), got q={q}, p={p}"
        )));
    }
    Ok(q * (q / p).ln() + (1.0 - q) * ((1.0 - q) / (1.0 - p)).ln())
}

/// `P(X > tau)` for standard normal X, via the complementary error function.
pub fn standard_normal_upper_tail(tau: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(tau / std::f64::consts::SQRT_2)
}

/// Which direction a theoretical bound constrains the empirical frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BoundKind {
    /// Frequency should be at least the bound.
    LowerBound,
    /// Frequency should be at most the bound.
    UpperBound,
}

/// Outcome of one Monte Carlo check.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct McReport {
    pub trials: usize,
    pub successes: usize,
    pub empirical_freq: f64,
    pub theoretical_bound: f64,
    /// Plug-in binomial standard error `sqrt(freq (1-freq) / trials)`.
    pub standard_error: f64,
    pub kind: BoundKind,
    pub pass: bool,
}

impl McReport {
    pub fn from_counts(
        trials: usize,
        successes: usize,
        theoretical_bound: f64,
        kind: BoundKind,
    ) -> McReport {
        let freq = successes as f64 / trials as f64;
        let se = (freq * (1.0 - freq) / trials as f64).sqrt();
        let pass = match kind {
            BoundKind::LowerBound => freq >= theoretical_bound - 3.0 * se,
            BoundKind::UpperBound => freq <= theoretical_bound + 3.0 * se,
        };
        McReport {
            trials,
            successes,
            empirical_freq: freq,
            theoretical_bound,
            standard_error: se,
            kind,
            pass,
        }
    }
}

fn require_quartile_n(n: usize) -> Result<()> {
    if n < 4 || n % 4 != 0 {
        return Err(Error::Domain(format!(
            "N must be a multiple of 4 and >= 4, got {n}"
        )));
    }
    Ok(())
}

fn require_trials(trials: usize) -> Result<()> {
    if trials < 1000 {
        return Err(Error::Domain(format!("trials must be >= 1000, got {trials}")));
    }
    Ok(())
}

/// Claimed probability `1 - 2 exp(-N K(1/4 || p))` of the quartile
/// order-statistics event, with `p = 0.0224`.
pub fn order_statistics_bound(n: usize) -> Result<f64> {
    let k = kl_binary(0.25, ANALYSIS_TAIL_P)?;
    Ok(1.0 - 2.0 * (-(n as f64) * k).exp())
}

/// Checks the claimed quartile order-statistics event: draw N i.i.d.
/// standard normals, sort ascending, and test whether the value at position
/// `3N/4 + 1` is `>= 2` and the value at position `N/4` is `<= -2`
/// (positions 1-based). The empirical frequency is compared against the
/// claimed lower bound `1 - 2 exp(-N K(1/4 || 0.0224))`.
pub fn mc_order_statistics_event(
    n: usize,
    trials: usize,
    rng: &mut dyn RngCore,
) -> Result<McReport> {
    require_quartile_n(n)?;
    require_trials(trials)?;
    let bound = order_statistics_bound(n)?;
    let mut successes = 0usize;
    let mut draws = vec![0.0f64; n];
    for _ in 0..trials {
        for v in draws.iter_mut() {
            *v = StandardNormal.sample(rng);
        }
        draws.sort_by(|a, b| a.total_cmp(b));
        // 1-based positions N/4 and 3N/4 + 1.
        if draws[3 * n / 4] >= 2.0 && draws[n / 4 - 1] <= -2.0 {
            successes += 1;
        }
    }
    Ok(McReport::from_counts(
        trials,
        successes,
        bound,
        BoundKind::LowerBound,
    ))
}

/// Checks the squared-norm bound `|u|^2 <= 2d + 3 ln(1/delta)` for standard
/// Gaussian d-vectors: the violation frequency should be at most `delta`.
pub fn mc_vector_norm_bound(
    d: usize,
    delta: f64,
    trials: usize,
    rng: &mut dyn RngCore,
) -> Result<McReport> {
    if d < 1 {
        return Err(Error::Domain("d must be >= 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain("delta must be in (0,1)".into()));
    }
    require_trials(trials)?;
    let bound = 2.0 * d as f64 + 3.0 * (1.0 / delta).ln();
    let mut violations = 0usize;
    for _ in 0..trials {
        let norm_sq: f64 = (0..d)
            .map(|_| {
                let v: f64 = StandardNormal.sample(rng);
                v * v
            })
            .sum();
        if norm_sq > bound {
            violations += 1;
        }
    }
    Ok(McReport::from_counts(
        trials,
        violations,
        delta,
        BoundKind::UpperBound,
    ))
}

/// Builds one descent direction from N fresh Gaussian d-vectors under an
/// arbitrary fixed ranking. The distribution is ranking-free: for any fixed
/// quartile index sets the two partial sums are independent Gaussians with
/// covariance `(N/4) I` each, so `d_t` is `N(0, (8/N) I)` regardless of
/// which indices are picked.
fn sample_direction_norm_sq(n: usize, d: usize, rng: &mut dyn RngCore) -> f64 {
    let w = 4.0 / n as f64;
    let mut dt = vec![0.0f64; d];
    // Identity ranking: first quartile positive, last quartile negative,
    // middle half unused (still drawn, matching the per-iteration sampling).
    for i in 0..n {
        let weight = if i < n / 4 {
            w
        } else if i >= 3 * n / 4 {
            -w
        } else {
            0.0
        };
        for slot in dt.iter_mut() {
            let v: f64 = StandardNormal.sample(rng);
            *slot += weight * v;
        }
    }
    vecops::norm_sq(&dt)
}

/// Checks the claimed high-probability bound `|d_t|^2 <= 8 C_{d,delta} / N`
/// with `C_{d,delta} = d + 2 ln(1/delta)`: the violation frequency should
/// be at most `delta`.
pub fn mc_direction_norm_bound(
    n: usize,
    d: usize,
    delta: f64,
    trials: usize,
    rng: &mut dyn RngCore,
) -> Result<McReport> {
    require_quartile_n(n)?;
    require_trials(trials)?;
    let bound = 8.0 * c_d_delta(d, delta)? / n as f64;
    let mut violations = 0usize;
    for _ in 0..trials {
        if sample_direction_norm_sq(n, d, rng) > bound {
            violations += 1;
        }
    }
    Ok(McReport::from_counts(
        trials,
        violations,
        delta,
        BoundKind::UpperBound,
    ))
}

/// Empirical mean of `|d_t|^2` together with its closed-form expectation
/// `8d/N` (from `d_t ~ N(0, (8/N) I_d)`).
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DirectionNormMean {
    pub trials: usize,
    pub empirical_mean: f64,
    pub expected_mean: f64,
}

pub fn mc_direction_norm_mean(
    n: usize,
    d: usize,
    trials: usize,
    rng: &mut dyn RngCore,
) -> Result<DirectionNormMean> {
    require_quartile_n(n)?;
    require_trials(trials)?;
    let mut sum = 0.0;
    for _ in 0..trials {
        sum += sample_direction_norm_sq(n, d, rng);
    }
    Ok(DirectionNormMean {
        trials,
        empirical_mean: sum / trials as f64,
        expected_mean: 8.0 * d as f64 / n as f64,
    })
}

/// The two scalar Gaussian checks share parameters, so they are reported
/// together: the single-draw tail bound and the max-of-N bound.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ScalarGaussianReports {
    /// `P(|X| > tau) <= 2 exp(-tau^2 / 2)`.
    pub tail: McReport,
    /// `P(max_i |X_i| > sqrt(2 ln(2N/delta))) <= delta`.
    pub max_abs: McReport,
}

pub fn mc_scalar_gaussian_bounds(
    tau: f64,
    n: usize,
    delta: f64,
    trials: usize,
    rng: &mut dyn RngCore,
) -> Result<ScalarGaussianReports> {
    if tau <= 0.0 {
        return Err(Error::Domain("tau must be positive".into()));
    }
    if n < 1 {
        return Err(Error::Domain("N must be >= 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain("delta must be in (0,1)".into()));
    }
    require_trials(trials)?;

    let tail_bound = 2.0 * (-tau * tau / 2.0).exp();
    let mut tail_hits = 0usize;
    for _ in 0..trials {
        let x: f64 = StandardNormal.sample(rng);
        if x.abs() > tau {
            tail_hits += 1;
        }
    }

    let threshold = (2.0 * (2.0 * n as f64 / delta).ln()).sqrt();
    let mut max_hits = 0usize;
    for _ in 0..trials {
        let max_abs = (0..n)
            .map(|_| {
                let x: f64 = StandardNormal.sample(rng);
                x.abs()
            })
            .fold(0.0f64, f64::max);
        if max_abs > threshold {
            max_hits += 1;
        }
    }

    Ok(ScalarGaussianReports {
        tail: McReport::from_counts(trials, tail_hits, tail_bound, BoundKind::UpperBound),
        max_abs: McReport::from_counts(trials, max_hits, delta, BoundKind::UpperBound),
    })
}

/// Checks the claimed descent-sum bound in the exactly-rankable case.
///
/// With a noiseless linear objective `f(x) = <g, x>`, ranking perturbed
/// values is exactly ranking the projections `<z, u_i>` with `z = g/|g|`
/// (the smoothing parameter cancels), so per trial we draw N projections
/// `~ N(0,1)`, sort ascending, and compute
/// `S = sum(first quartile) - sum(last quartile)`. The analysis claims
/// `S <= -N` with probability at least `1 - 2 exp(-N K(1/4 || 0.0224))`.
/// By rotational symmetry the direction of `g` is irrelevant; `d` only
/// labels the ambient space.
pub fn mc_descent_sum_bound(
    n: usize,
    _d: usize,
    trials: usize,
    rng: &mut dyn RngCore,
) -> Result<McReport> {
    require_quartile_n(n)?;
    require_trials(trials)?;
    let bound = order_statistics_bound(n)?;
    let mut successes = 0usize;
    let mut proj = vec![0.0f64; n];
    for _ in 0..trials {
        for v in proj.iter_mut() {
            *v = StandardNormal.sample(rng);
        }
        proj.sort_by(|a, b| a.total_cmp(b));
        let quarter = n / 4;
        let s: f64 = proj[..quarter].iter().sum::<f64>() - proj[n - quarter..].iter().sum::<f64>();
        if s <= -(n as f64) {
            successes += 1;
        }
    }
    Ok(McReport::from_counts(
        trials,
        successes,
        bound,
        BoundKind::LowerBound,
    ))
}

/// Verifies that the tight sequence `D_{t+1} = rho_t D_t + beta_t` equals
/// its unrolled closed form
/// `D_{t+1} = (prod_{i=k..t} rho_i) D_k + sum_{j=k..t} (prod_{i=j+1..t} rho_i) beta_j`
/// from every anchor `k`, within 1e-10 relative tolerance.
pub fn check_recursion_unroll(rhos: &[f64], betas: &[f64], delta1: f64) -> Result<bool> {
    if rhos.len() != betas.len() {
        return Err(Error::Domain("rhos and betas must have equal length".into()));
    }
    if rhos.iter().any(|&r| r < 0.0) || delta1 < 0.0 {
        return Err(Error::Domain("rhos and delta1 must be nonnegative".into()));
    }
    let t_max = rhos.len();
    // deltas[k] = D_{k+1}, with D_1 = delta1 at index 0.
    let mut deltas = vec![delta1];
    for t in 0..t_max {
        let next = rhos[t] * deltas[t] + betas[t];
        deltas.push(next);
    }
    for k in 0..=t_max {
        // Closed form for D_{t_max + 1} anchored at D_{k + 1}.
        let mut prod = 1.0;
        let mut value = 0.0;
        for j in (k..t_max).rev() {
            // After this loop iteration, `prod` = prod_{i=j..t_max-1} rho_i.
            value += prod * betas[j];
            prod *= rhos[j];
        }
        value += prod * deltas[k];
        let reference = deltas[t_max];
        let tol = 1e-10 * reference.abs().max(1.0);
        if (value - reference).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verifies the `a/t` decay of the extremal sequence
/// `D_{t+1} = (b / (t (t-1))) sqrt(sum_{i=2..t} (i-1)^2 D_i) + c/t`
/// with `a = 9 b^2 / 4 + 3 c` and any `D_2 <= a/2`: asserts `D_t <= a/t`
/// for all `2 <= t <= T`.
pub fn check_sequence_rate(b: f64, c: f64, horizon: usize) -> Result<bool> {
    if b < 0.0 || c < 0.0 {
        return Err(Error::Domain("b and c must be nonnegative".into()));
    }
    if horizon < 2 {
        return Err(Error::Domain("horizon must be >= 2".into()));
    }
    let a = 9.0 * b * b / 4.0 + 3.0 * c;
    // deltas[t] = D_t for t >= 2 (indices 0 and 1 unused).
    let mut deltas = vec![0.0f64; horizon + 1];
    deltas[2] = a / 2.0;
    let mut weighted_sum = 0.0; // sum_{i=2..t} (i-1)^2 D_i
    let tol = 1e-12 * a.max(1.0);
    for t in 2..=horizon {
        if deltas[t] > a / t as f64 + tol {
            return Ok(false);
        }
        if t < horizon {
            let w = (t - 1) as f64;
            weighted_sum += w * w * deltas[t];
            deltas[t + 1] =
                b / (t as f64 * (t - 1) as f64) * weighted_sum.sqrt() + c / t as f64;
        }
    }
    Ok(true)
}

/// Checks, at sampled points of the certification region, that
/// `|grad f(x)|^2 <= 2 L (f(x) - f*)` and — when the problem is strongly
/// convex — `|grad f(x)|^2 >= 2 mu (f(x) - f*)`. A violation is an error
/// naming the point and the inequality.
pub fn check_convexity_bounds(
    problem: &dyn StochasticProblem,
    samples: usize,
    rng: &mut dyn RngCore,
) -> Result<bool> {
    if samples < 100 {
        return Err(Error::Domain("samples must be >= 100".into()));
    }
    let d = problem.dim();
    let c = problem.constants();
    let slack = 1.0 + 1e-9;
    for _ in 0..samples {
        // Uniform in the region ball around the optimum.
        let u: f64 = rand::Rng::gen::<f64>(rng);
        let radius = c.region_radius * u.powf(1.0 / d as f64);
        let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let gn = vecops::norm(&g).max(1e-300);
        let x: Vec<f64> = problem
            .optimum()
            .iter()
            .zip(&g)
            .map(|(o, gi)| o + radius * gi / gn)
            .collect();

        let gap = problem.eval_true(&x) - problem.f_star();
        let grad_sq = vecops::norm_sq(&problem.grad_true(&x));
        if grad_sq > 2.0 * c.l * gap * slack + 1e-12 {
            return Err(Error::Certification {
                assumption: "smoothness gradient bound".into(),
                detail: format!("|grad|^2 = {grad_sq} > 2 L gap = {} at {x:?}", 2.0 * c.l * gap),
            });
        }
        if let Some(mu) = c.mu {
            if grad_sq < 2.0 * mu * gap / slack - 1e-12 {
                return Err(Error::Certification {
                    assumption: "strong convexity gradient bound".into(),
                    detail: format!(
                        "|grad|^2 = {grad_sq} < 2 mu gap = {} at {x:?}",
                        2.0 * mu * gap
                    ),
                });
            }
        }
    }
    Ok(true)
}
