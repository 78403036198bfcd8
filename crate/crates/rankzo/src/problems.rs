//! Stochastic test problems with certified constants.
//!
//! Each problem is a smooth objective `f(x) = E_xi[f(x; xi)]` whose noise
//! channel is a linear perturbation `f(x; xi) = f(x) + <xi, x>` with `xi`
//! drawn uniformly from a sphere of radius `r`. This keeps every constant
//! the optimizer's analysis needs in closed form: the stochastic gradient
//! is `grad f(x) + xi` with `|xi| = r` exactly, so on a ball of radius `R`
//! around the optimum the stochastic gradient norm lies in
//! `[r - sup|grad f|, sup|grad f| + r]`.

use crate::error::{Error, Result};
use crate::vecops;
use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

/// Noise channel specification.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum NoiseSpec {
    /// `f(x; xi) = f(x) + <xi, x>` with `xi` uniform on the sphere of the
    /// given radius. Radius 0 is the noiseless special case.
    SphereLinear { radius: f64 },
}

impl NoiseSpec {
    pub fn radius(&self) -> f64 {
        match self {
            NoiseSpec::SphereLinear { radius } => *radius,
        }
    }
}

/// Constants certified on a ball of radius `region_radius` around the optimum.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ProblemConstants {
    /// Smoothness constant L.
    pub l: f64,
    /// Strong convexity constant, when the problem has one.
    pub mu: Option<f64>,
    /// Upper bound on the stochastic gradient norm over the region.
    pub g_upper: f64,
    /// Lower bound on the stochastic gradient norm over the region; absent
    /// in the noiseless case (the true gradient vanishes at the optimum).
    pub g_lower: Option<f64>,
    /// Radius R of the certification region.
    pub region_radius: f64,
}

/// A smooth objective with a noise channel and certified constants.
pub trait StochasticProblem {
    fn dim(&self) -> usize;
    /// Minimal objective value, attained at [`optimum`](Self::optimum).
    fn f_star(&self) -> f64;
    fn optimum(&self) -> &[f64];
    fn constants(&self) -> &ProblemConstants;
    fn eval_true(&self, x: &[f64]) -> f64;
    fn eval_stoch(&self, x: &[f64], xi: &[f64]) -> f64;
    fn grad_true(&self, x: &[f64]) -> Vec<f64>;
    fn grad_stoch(&self, x: &[f64], xi: &[f64]) -> Vec<f64>;
    /// One draw from the noise channel.
    fn sample_noise(&self, rng: &mut dyn RngCore) -> Vec<f64>;
}

/// Draws a point uniformly from the sphere of the given radius (the zero
/// vector when the radius is 0).
fn sphere_sample(rng: &mut dyn RngCore, dim: usize, radius: f64) -> Vec<f64> {
    if radius == 0.0 {
        return vec![0.0; dim];
    }
    loop {
        let g: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n = vecops::norm(&g);
        if n > 1e-12 {
            return g.iter().map(|v| v * radius / n).collect();
        }
    }
}

/// Diagonal quadratic `f(x) = 1/2 x' A x` with eigenvalues linearly spaced
/// in `[lambda_min, lambda_max]`; strongly convex with `mu = lambda_min`.
#[derive(Debug, Clone)]
pub struct Quadratic {
    eigenvalues: Vec<f64>,
    noise_radius: f64,
    optimum: Vec<f64>,
    constants: ProblemConstants,
}

impl Quadratic {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
}

/// Builds the diagonal quadratic test problem.
///
/// With sphere noise of radius `r > lambda_max * region_radius` the
/// stochastic gradient norm is bounded below by `r - lambda_max * R` on the
/// region, giving a strictly positive `g_lower`. `r = 0` is accepted as the
/// noiseless special case (no `g_lower`); any other `r <= lambda_max * R`
/// makes the lower bound unsatisfiable and is rejected.
pub fn make_quadratic(
    dim: usize,
    lambda_min: f64,
    lambda_max: f64,
    noise: NoiseSpec,
    region_radius: f64,
) -> Result<Quadratic> {
    if dim < 1 {
        return Err(Error::Domain("dim must be >= 1".into()));
    }
    if !(lambda_min > 0.0 && lambda_min <= lambda_max) {
        return Err(Error::Domain(format!(
            "need 0 < lambda_min <= lambda_max, got [{lambda_min}, {lambda_max}]"
        )));
    }
    if region_radius <= 0.0 {
        return Err(Error::Domain("region_radius must be positive".into()));
    }
    let r = noise.radius();
    if r < 0.0 {
        return Err(Error::Domain("noise radius must be nonnegative".into()));
    }
    if r > 0.0 && r <= lambda_max * region_radius {
        return Err(Error::Certification {
            assumption: "gradient lower bound".into(),
            detail: format!(
                "noise radius {r} must exceed lambda_max * R = {}",
                lambda_max * region_radius
            ),
        });
    }
    let eigenvalues: Vec<f64> = if dim == 1 {
        vec![lambda_max]
    } else {
        (0..dim)
            .map(|i| lambda_min + (lambda_max - lambda_min) * i as f64 / (dim - 1) as f64)
            .collect()
    };
    let g_lower = if r > 0.0 {
        Some(r - lambda_max * region_radius)
    } else {
        None
    };
    Ok(Quadratic {
        eigenvalues,
        noise_radius: r,
        optimum: vec![0.0; dim],
        constants: ProblemConstants {
            l: lambda_max,
            mu: Some(lambda_min),
            g_upper: lambda_max * region_radius + r,
            g_lower,
            region_radius,
        },
    })
}

impl StochasticProblem for Quadratic {
    fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    fn f_star(&self) -> f64 {
        0.0
    }

    fn optimum(&self) -> &[f64] {
        &self.optimum
    }

    fn constants(&self) -> &ProblemConstants {
        &self.constants
    }

    fn eval_true(&self, x: &[f64]) -> f64 {
        0.5 * x
            .iter()
            .zip(&self.eigenvalues)
            .map(|(xi, l)| l * xi * xi)
            .sum::<f64>()
    }

    fn eval_stoch(&self, x: &[f64], xi: &[f64]) -> f64 {
        self.eval_true(x) + vecops::dot(xi, x)
    }

    fn grad_true(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.eigenvalues).map(|(xi, l)| l * xi).collect()
    }

    fn grad_stoch(&self, x: &[f64], xi: &[f64]) -> Vec<f64> {
        let mut g = self.grad_true(x);
        vecops::add_scaled(&mut g, 1.0, xi);
        g
    }

    fn sample_noise(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        sphere_sample(rng, self.dim(), self.noise_radius)
    }
}

/// Nonconvex separable objective
/// `f(x) = 1/2 |x|^2 + a * sum_i (cos(x_i) - 1)` with `a > 1`.
///
/// Each coordinate has a nonzero global minimizer `s*` solving
/// `s = a sin(s)` on `(0, pi)`; the Hessian at the origin has entries
/// `1 - a < 0`, witnessing nonconvexity.
#[derive(Debug, Clone)]
pub struct NonconvexCosine {
    dim: usize,
    a: f64,
    noise_radius: f64,
    optimum: Vec<f64>,
    f_star: f64,
    constants: ProblemConstants,
    nonconvexity_witness: Vec<f64>,
}

impl NonconvexCosine {
    pub fn a(&self) -> f64 {
        self.a
    }

    /// A point where the Hessian has a negative eigenvalue (the origin).
    pub fn nonconvexity_witness(&self) -> &[f64] {
        &self.nonconvexity_witness
    }

    /// The per-coordinate minimizer `s*` solving `s = a sin(s)`.
    pub fn coordinate_minimizer(&self) -> f64 {
        self.optimum[0]
    }
}

/// Root of `s - a sin(s)` on `(0, pi)` by bisection. Exists and is unique
/// for `a > 1`: the function is negative just above 0 and equals pi at pi.
fn coordinate_minimizer(a: f64) -> f64 {
    let g = |s: f64| s - a * s.sin();
    let (mut lo, mut hi) = (1e-9, std::f64::consts::PI);
    debug_assert!(g(lo) < 0.0 && g(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Builds the nonconvex cosine test problem. Requires `a > 1`
/// (nonconvexity) and, for noisy instances, `r > (1 + a) * region_radius`
/// so the stochastic gradient norm stays bounded away from zero on the
/// region; `r = 0` is the noiseless special case.
pub fn make_nonconvex_cosine(
    dim: usize,
    a: f64,
    noise: NoiseSpec,
    region_radius: f64,
) -> Result<NonconvexCosine> {
    if dim < 1 {
        return Err(Error::Domain("dim must be >= 1".into()));
    }
    if a <= 1.0 {
        return Err(Error::Domain(format!(
            "a must exceed 1 for nonconvexity, got {a}"
        )));
    }
    if region_radius <= 0.0 {
        return Err(Error::Domain("region_radius must be positive".into()));
    }
    let r = noise.radius();
    if r < 0.0 {
        return Err(Error::Domain("noise radius must be nonnegative".into()));
    }
    let l = 1.0 + a;
    if r > 0.0 && r <= l * region_radius {
        return Err(Error::Certification {
            assumption: "gradient lower bound".into(),
            detail: format!(
                "noise radius {r} must exceed (1 + a) * R = {}",
                l * region_radius
            ),
        });
    }
    let s = coordinate_minimizer(a);
    let f_star = dim as f64 * (0.5 * s * s + a * (s.cos() - 1.0));
    let g_lower = if r > 0.0 { Some(r - l * region_radius) } else { None };
    Ok(NonconvexCosine {
        dim,
        a,
        noise_radius: r,
        optimum: vec![s; dim],
        f_star,
        constants: ProblemConstants {
            l,
            mu: None,
            // The per-coordinate gradient s - a sin(s) vanishes at s*, and is
            // (1 + a)-Lipschitz, so its magnitude on the region is at most
            // (1 + a) * R.
            g_upper: l * region_radius + r,
            g_lower,
            region_radius,
        },
        nonconvexity_witness: vec![0.0; dim],
    })
}

impl StochasticProblem for NonconvexCosine {
    fn dim(&self) -> usize {
        self.dim
    }

    fn f_star(&self) -> f64 {
        self.f_star
    }

    fn optimum(&self) -> &[f64] {
        &self.optimum
    }

    fn constants(&self) -> &ProblemConstants {
        &self.constants
    }

    fn eval_true(&self, x: &[f64]) -> f64 {
        x.iter()
            .map(|&xi| 0.5 * xi * xi + self.a * (xi.cos() - 1.0))
            .sum()
    }

    fn eval_stoch(&self, x: &[f64], xi: &[f64]) -> f64 {
        self.eval_true(x) + vecops::dot(xi, x)
    }

    fn grad_true(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|&xi| xi - self.a * xi.sin()).collect()
    }

    fn grad_stoch(&self, x: &[f64], xi: &[f64]) -> Vec<f64> {
        let mut g = self.grad_true(x);
        vecops::add_scaled(&mut g, 1.0, xi);
        g
    }

    fn sample_noise(&self, rng: &mut dyn RngCore) -> Vec<f64> {
        sphere_sample(rng, self.dim, self.noise_radius)
    }
}

/// Result of an empirical constants check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CertificationReport {
    pub trials: usize,
    pub max_grad_stoch_norm: f64,
    pub min_grad_stoch_norm: f64,
    pub max_smoothness_ratio: f64,
    pub g_upper: f64,
    pub g_lower: Option<f64>,
    pub l: f64,
}

/// Samples points uniformly on the certification region (and noise draws)
/// and checks the stated constants: max observed stochastic gradient norm
/// `<= g_upper`, min observed `>= g_lower` (when present), and the local
/// smoothness ratio `2|f(y) - f(x) - <grad f(x), y - x>| / |y - x|^2`
/// at most `l * (1 + 1e-6)`. Any violation is an error naming the
/// violated assumption.
pub fn certify_constants(
    problem: &dyn StochasticProblem,
    trials: usize,
    rng: &mut dyn RngCore,
) -> Result<CertificationReport> {
    if trials < 1000 {
        return Err(Error::Domain("trials must be >= 1000".into()));
    }
    let d = problem.dim();
    let c = problem.constants().clone();
    let sample_point = |rng: &mut dyn RngCore| -> Vec<f64> {
        // Uniform in the ball: Gaussian direction, radius R * U^(1/d).
        let u: f64 = rand::Rng::gen::<f64>(rng);
        let radius = c.region_radius * u.powf(1.0 / d as f64);
        let dir = sphere_sample(rng, d, 1.0);
        let mut x = problem.optimum().to_vec();
        vecops::add_scaled(&mut x, radius, &dir);
        x
    };

    let mut max_norm = f64::NEG_INFINITY;
    let mut min_norm = f64::INFINITY;
    let mut max_ratio = 0.0_f64;
    for _ in 0..trials {
        let x = sample_point(rng);
        let xi = problem.sample_noise(rng);
        let n = vecops::norm(&problem.grad_stoch(&x, &xi));
        max_norm = max_norm.max(n);
        min_norm = min_norm.min(n);

        let y = sample_point(rng);
        let diff: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
        let dist_sq = vecops::norm_sq(&diff);
        if dist_sq > 1e-12 {
            let lin = problem.eval_true(&x) + vecops::dot(&problem.grad_true(&x), &diff);
            let ratio = 2.0 * (problem.eval_true(&y) - lin).abs() / dist_sq;
            max_ratio = max_ratio.max(ratio);
        }
    }

    if max_norm > c.g_upper {
        return Err(Error::Certification {
            assumption: "bounded second moment (G_u)".into(),
            detail: format!("observed gradient norm {max_norm} > G_u = {}", c.g_upper),
        });
    }
    if let Some(gl) = c.g_lower {
        if min_norm < gl {
            return Err(Error::Certification {
                assumption: "gradient lower bound (G_l)".into(),
                detail: format!("observed gradient norm {min_norm} < G_l = {gl}"),
            });
        }
    }
    if max_ratio > c.l * (1.0 + 1e-6) {
        return Err(Error::Certification {
            assumption: "smoothness (L)".into(),
            detail: format!("observed smoothness ratio {max_ratio} > L = {}", c.l),
        });
    }

    Ok(CertificationReport {
        trials,
        max_grad_stoch_norm: max_norm,
        min_grad_stoch_norm: min_norm,
        max_smoothness_ratio: max_ratio,
        g_upper: c.g_upper,
        g_lower: c.g_lower,
        l: c.l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quadratic_noiseless_values() {
        let p = make_quadratic(1, 1.0, 1.0, NoiseSpec::SphereLinear { radius: 0.0 }, 4.0).unwrap();
        assert_eq!(p.eval_true(&[3.0]), 4.5);
        assert_eq!(p.grad_true(&[3.0]), vec![3.0]);
        assert_eq!(p.f_star(), 0.0);
        assert!(p.constants().g_lower.is_none());
    }

    #[test]
    fn quadratic_eigenvalues_linspace() {
        let p = make_quadratic(5, 1.0, 9.0, NoiseSpec::SphereLinear { radius: 0.0 }, 1.0).unwrap();
        assert_eq!(p.eigenvalues(), &[1.0, 3.0, 5.0, 7.0, 9.0]);
        assert_eq!(p.constants().l, 9.0);
        assert_eq!(p.constants().mu, Some(1.0));
    }

    #[test]
    fn quadratic_rejects_small_noise_radius() {
        // 0 < r <= lambda_max * R makes the gradient lower bound unsatisfiable.
        let err = make_quadratic(3, 1.0, 2.0, NoiseSpec::SphereLinear { radius: 1.5 }, 1.0);
        assert!(matches!(err, Err(Error::Certification { .. })));
        // r = 0 is the noiseless special case and is accepted.
        assert!(make_quadratic(3, 1.0, 2.0, NoiseSpec::SphereLinear { radius: 0.0 }, 1.0).is_ok());
        assert!(make_quadratic(3, 1.0, 2.0, NoiseSpec::SphereLinear { radius: 2.5 }, 1.0).is_ok());
    }

    #[test]
    fn noise_lies_on_sphere_and_shifts_gradient() {
        let p = make_quadratic(6, 1.0, 2.0, NoiseSpec::SphereLinear { radius: 7.0 }, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = [0.2, -0.1, 0.4, 0.0, -0.3, 0.5];
        for _ in 0..100 {
            let xi = p.sample_noise(&mut rng);
            assert!((vecops::norm(&xi) - 7.0).abs() < 1e-9);
            let g = p.grad_stoch(&x, &xi);
            let expected: Vec<f64> = p
                .grad_true(&x)
                .iter()
                .zip(&xi)
                .map(|(a, b)| a + b)
                .collect();
            assert_eq!(g, expected);
        }
    }

    #[test]
    fn stochastic_evaluation_is_unbiased() {
        let p = make_quadratic(4, 1.0, 3.0, NoiseSpec::SphereLinear { radius: 5.0 }, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = [0.5, -0.25, 0.75, 0.1];
        let trials = 10_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..trials {
            let v = p.eval_stoch(&x, &p.sample_noise(&mut rng));
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / trials as f64;
        let var = sum_sq / trials as f64 - mean * mean;
        let se = (var / trials as f64).sqrt();
        assert!(
            (mean - p.eval_true(&x)).abs() < 4.0 * se,
            "mean {mean} vs true {} (se {se})",
            p.eval_true(&x)
        );
    }

    #[test]
    fn cosine_requires_nonconvexity() {
        assert!(make_nonconvex_cosine(2, 1.0, NoiseSpec::SphereLinear { radius: 0.0 }, 1.0).is_err());
        assert!(make_nonconvex_cosine(2, 0.5, NoiseSpec::SphereLinear { radius: 0.0 }, 1.0).is_err());
        assert!(matches!(
            make_nonconvex_cosine(2, 2.0, NoiseSpec::SphereLinear { radius: 2.0 }, 1.0),
            Err(Error::Certification { .. })
        ));
    }

    #[test]
    fn cosine_stationary_origin_and_witness() {
        let p = make_nonconvex_cosine(1, 2.0, NoiseSpec::SphereLinear { radius: 0.0 }, 1.0).unwrap();
        assert_eq!(p.grad_true(&[0.0]), vec![0.0]);
        // Hessian entry at the witness: 1 - a cos(0) = -1 < 0.
        let w = p.nonconvexity_witness().to_vec();
        let h = 1.0 - p.a() * w[0].cos();
        assert!(h < 0.0);
    }

    #[test]
    fn cosine_minimizer_solves_fixed_point() {
        let p = make_nonconvex_cosine(3, 2.0, NoiseSpec::SphereLinear { radius: 0.0 }, 1.0).unwrap();
        let s = p.coordinate_minimizer();
        assert!((s - 2.0 * s.sin()).abs() < 1e-10, "s = {s}");
        assert!((s - 1.8955).abs() < 1e-3);
        // The optimum really is a minimum of the true objective.
        assert!(p.f_star() < 0.0);
        assert!((p.eval_true(p.optimum()) - p.f_star()).abs() < 1e-12);
        let g = p.grad_true(p.optimum());
        assert!(vecops::norm(&g) < 1e-9);
    }

    #[test]
    fn cosine_gradient_matches_finite_differences() {
        let p = make_nonconvex_cosine(5, 2.0, NoiseSpec::SphereLinear { radius: 0.0 }, 1.0).unwrap();
        let x = [0.7, -0.4, 1.3, 0.1, -1.1];
        let g = p.grad_true(&x);
        let h = 1e-6;
        for i in 0..5 {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            let fd = (p.eval_true(&xp) - p.eval_true(&xm)) / (2.0 * h);
            let rel = (fd - g[i]).abs() / g[i].abs().max(1.0);
            assert!(rel < 1e-5, "coordinate {i}: fd {fd} vs grad {}", g[i]);
        }
    }

    #[test]
    fn certify_constants_accepts_valid_problems() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = make_quadratic(5, 1.0, 2.0, NoiseSpec::SphereLinear { radius: 10.0 }, 1.0).unwrap();
        let report = certify_constants(&q, 10_000, &mut rng).unwrap();
        assert!(report.max_grad_stoch_norm <= 12.0);
        assert!(report.min_grad_stoch_norm >= 8.0);
        assert!(report.max_smoothness_ratio <= 2.0 * (1.0 + 1e-6));

        let c = make_nonconvex_cosine(4, 2.0, NoiseSpec::SphereLinear { radius: 5.0 }, 1.0).unwrap();
        let report = certify_constants(&c, 5_000, &mut rng).unwrap();
        assert!(report.max_smoothness_ratio <= 3.0 * (1.0 + 1e-6));
        assert!(report.min_grad_stoch_norm >= 2.0);
    }

    #[test]
    fn certify_constants_needs_enough_trials() {
        let q = make_quadratic(2, 1.0, 2.0, NoiseSpec::SphereLinear { radius: 0.0 }, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!(certify_constants(&q, 999, &mut rng).is_err());
    }
}
