//! Experiment specifications and their JSON form.

use crate::error::{Error, Result};
use crate::optimizer::{
    c_d_delta, fixed_horizon_eta, smoothing_parameter, OptimizerConfig, StepRule, StepSchedule,
};
use crate::problems::{
    make_nonconvex_cosine, make_quadratic, NoiseSpec, StochasticProblem,
};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Problem family plus parameters, as written in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProblemSpec {
    Quadratic {
        dim: usize,
        lambda_min: f64,
        lambda_max: f64,
        noise_radius: f64,
        region_radius: f64,
    },
    NonconvexCosine {
        dim: usize,
        a: f64,
        noise_radius: f64,
        region_radius: f64,
    },
}

impl ProblemSpec {
    pub fn dim(&self) -> usize {
        match self {
            ProblemSpec::Quadratic { dim, .. } => *dim,
            ProblemSpec::NonconvexCosine { dim, .. } => *dim,
        }
    }

    pub fn build(&self) -> Result<Box<dyn StochasticProblem>> {
        match *self {
            ProblemSpec::Quadratic {
                dim,
                lambda_min,
                lambda_max,
                noise_radius,
                region_radius,
            } => Ok(Box::new(make_quadratic(
                dim,
                lambda_min,
                lambda_max,
                NoiseSpec::SphereLinear {
                    radius: noise_radius,
                },
                region_radius,
            )?)),
            ProblemSpec::NonconvexCosine {
                dim,
                a,
                noise_radius,
                region_radius,
            } => Ok(Box::new(make_nonconvex_cosine(
                dim,
                a,
                NoiseSpec::SphereLinear {
                    radius: noise_radius,
                },
                region_radius,
            )?)),
        }
    }
}

/// Step-size rule as written in config files. Parameters left out are
/// resolved from the problem: the strong convexity constant from the
/// problem's `mu`, the fixed-horizon step from the closed-form
/// `sqrt(N/(T L C)) sqrt(gap_1) / G_u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ScheduleSpec {
    StronglyConvex { mu: Option<f64> },
    FixedHorizon { eta_hat: Option<f64> },
    Constant { eta: f64 },
}

/// Which convergence criterion the experiment tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Optimality gap `f(x_t) - f*`; summarized by per-t median/quartiles.
    StronglyConvexGap,
    /// Running average of `|grad f(x_t)|^2` over the run so far.
    NonconvexStationarity,
}

/// A complete experiment: problem, optimizer settings, seeds, and target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub problem: ProblemSpec,
    pub sample_size: usize,
    pub horizon: usize,
    /// Smoothing parameter; when absent, defaults to the largest permitted
    /// value `g_lower / (2 C L)` with `delta = 1/(20 N T)` (requires a
    /// noisy problem, which is what makes `g_lower` available).
    pub alpha: Option<f64>,
    pub schedule: ScheduleSpec,
    /// Oracle-assisted mode: multiply each step by the stochastic gradient
    /// norm at the iterate.
    pub gradient_norm_scaling: bool,
    pub seeds: Vec<u64>,
    pub target_epsilon: Option<f64>,
    pub mode: Mode,
    /// Start point; when absent, `optimum + R * e_1` (on the region
    /// boundary along the first coordinate).
    pub x1: Option<Vec<f64>>,
}

/// An `ExperimentSpec` with every defaulted field made concrete.
pub struct ResolvedExperiment {
    pub problem: Box<dyn StochasticProblem>,
    /// Base config; `run_experiment` overwrites `seed` per run.
    pub config: OptimizerConfig,
    pub x1: Vec<f64>,
    pub initial_gap: f64,
}

impl ExperimentSpec {
    pub fn from_json_file(path: &Path) -> Result<ExperimentSpec> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Config("seeds must be nonempty".into()));
        }
        if let Some(eps) = self.target_epsilon {
            if eps <= 0.0 {
                return Err(Error::Config("target_epsilon must be positive".into()));
            }
        }
        // horizon 0 is allowed: the run is a no-op and the summary is empty.
        Ok(())
    }

    /// Builds the problem and fills in every defaulted parameter.
    pub fn resolve(&self) -> Result<ResolvedExperiment> {
        self.validate()?;
        let problem = self.problem.build()?;
        let consts = problem.constants().clone();
        let d = problem.dim();
        let n = self.sample_size;
        let t = self.horizon;
        let delta = 1.0 / (20.0 * n as f64 * t.max(1) as f64);
        let c = c_d_delta(d, delta)?;

        let x1 = match &self.x1 {
            Some(x) => {
                if x.len() != d {
                    return Err(Error::Config(format!(
                        "x1 has dimension {}, problem has {d}",
                        x.len()
                    )));
                }
                x.clone()
            }
            None => {
                let mut x = problem.optimum().to_vec();
                x[0] += consts.region_radius;
                x
            }
        };
        let initial_gap = problem.eval_true(&x1) - problem.f_star();

        let alpha = match self.alpha {
            Some(a) => a,
            None => {
                let g_lower = consts.g_lower.ok_or_else(|| {
                    Error::Config(
                        "alpha default needs a noisy problem (g_lower); supply alpha explicitly"
                            .into(),
                    )
                })?;
                smoothing_parameter(g_lower, consts.l, c)?
            }
        };

        let rule = match self.schedule {
            ScheduleSpec::StronglyConvex { mu } => {
                let mu = match mu.or(consts.mu) {
                    Some(m) => m,
                    None => {
                        return Err(Error::Config(
                            "strongly convex schedule needs mu (problem has none)".into(),
                        ))
                    }
                };
                StepRule::StronglyConvex { mu }
            }
            ScheduleSpec::FixedHorizon { eta_hat } => {
                let eta_hat = match eta_hat {
                    Some(e) => e,
                    None => fixed_horizon_eta(n, t, consts.l, c, initial_gap, consts.g_upper)?,
                };
                StepRule::FixedHorizon { eta_hat }
            }
            ScheduleSpec::Constant { eta } => StepRule::Constant { eta },
        };

        let config = OptimizerConfig {
            dim: d,
            sample_size: n,
            horizon: t,
            alpha,
            schedule: StepSchedule {
                rule,
                gradient_norm_scaling: self.gradient_norm_scaling,
            },
            seed: 0,
        };
        config.validate()?;
        Ok(ResolvedExperiment {
            problem,
            config,
            x1,
            initial_gap,
        })
    }
}
