//! Experiment runner, baseline, scaling-law fits, and report emission.

pub mod baseline;
pub mod config;
pub mod report;

pub use baseline::{baseline_two_point_zo, tune_baseline, BaselineConfig, BaselineSchedule};
pub use config::{ExperimentSpec, Mode, ProblemSpec, ResolvedExperiment, ScheduleSpec};
pub use report::{emit_report, parse_traces_csv, traces_to_csv, ReportFormat, TraceRun};

use crate::error::{Error, Result};
use crate::optimizer;
use crate::verify::kl_binary;
use serde::Serialize;

/// Per-iteration cross-seed statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummaryRecord {
    pub t: usize,
    pub queries: u64,
    pub median: f64,
    pub lower_quartile: f64,
    pub upper_quartile: f64,
}

/// Cross-seed summary of one experiment.
///
/// In [`Mode::StronglyConvexGap`] the summarized quantity is the optimality
/// gap `f(x_t) - f*`; in [`Mode::NonconvexStationarity`] it is the running
/// average of `|grad f(x_t)|^2` over the run so far, matching the
/// average-stationarity criterion the nonconvex rate is stated for.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub mode: Mode,
    pub sample_size: usize,
    pub horizon: usize,
    pub seeds_succeeded: usize,
    pub initial_gap: f64,
    pub per_t: Vec<SummaryRecord>,
    pub target_epsilon: Option<f64>,
    /// `N * t` at the first iteration whose median gap falls below the
    /// target (gap mode only).
    pub queries_to_target: Option<u64>,
}

/// All artifacts of one experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentOutcome {
    pub runs: Vec<TraceRun>,
    /// Seeds whose run failed, with the failure message; the summary is
    /// computed over the successes.
    pub failures: Vec<(u64, String)>,
    pub summary: ExperimentSummary,
}

/// Linear interpolation percentile of a sorted slice, `q` in [0, 1].
fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

/// Runs one optimizer run per seed and summarizes across seeds.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutcome> {
    run_experiment_with_offset(spec, 0)
}

/// Like [`run_experiment`], with every seed shifted by `seed_offset`.
pub fn run_experiment_with_offset(
    spec: &ExperimentSpec,
    seed_offset: u64,
) -> Result<ExperimentOutcome> {
    let resolved = spec.resolve()?;
    let mut runs = Vec::new();
    let mut failures = Vec::new();
    for &seed in &spec.seeds {
        let seed = seed.wrapping_add(seed_offset);
        let mut config = resolved.config.clone();
        config.seed = seed;
        match optimizer::run(resolved.problem.as_ref(), &config, &resolved.x1) {
            Ok(trace) => runs.push(TraceRun {
                run_id: format!("seed{seed}"),
                seed,
                trace,
            }),
            Err(e) => failures.push((seed, e.to_string())),
        }
    }
    if runs.is_empty() && !spec.seeds.is_empty() && spec.horizon > 0 {
        return Err(Error::Config(format!(
            "all {} runs failed; first failure: {}",
            spec.seeds.len(),
            failures
                .first()
                .map(|(_, m)| m.as_str())
                .unwrap_or("unknown")
        )));
    }

    let horizon = runs
        .iter()
        .map(|r| r.trace.records.len())
        .min()
        .unwrap_or(0);
    let mut per_t = Vec::with_capacity(horizon);
    // Per-seed running sums for the stationarity mode.
    let mut running_sums = vec![0.0f64; runs.len()];
    let mut values = vec![0.0f64; runs.len()];
    for idx in 0..horizon {
        let t = idx + 1;
        for (j, run) in runs.iter().enumerate() {
            let rec = &run.trace.records[idx];
            values[j] = match spec.mode {
                Mode::StronglyConvexGap => rec.f_gap,
                Mode::NonconvexStationarity => {
                    running_sums[j] += rec.grad_sq;
                    running_sums[j] / t as f64
                }
            };
        }
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        per_t.push(SummaryRecord {
            t,
            queries: runs[0].trace.records[idx].queries,
            median: percentile_sorted(&sorted, 0.5),
            lower_quartile: percentile_sorted(&sorted, 0.25),
            upper_quartile: percentile_sorted(&sorted, 0.75),
        });
    }

    let queries_to_target = match (spec.mode, spec.target_epsilon) {
        (Mode::StronglyConvexGap, Some(eps)) => per_t
            .iter()
            .find(|r| r.median <= eps)
            .map(|r| r.queries),
        _ => None,
    };

    Ok(ExperimentOutcome {
        summary: ExperimentSummary {
            mode: spec.mode,
            sample_size: spec.sample_size,
            horizon: spec.horizon,
            seeds_succeeded: runs.len(),
            initial_gap: resolved.initial_gap,
            per_t,
            target_epsilon: spec.target_epsilon,
            queries_to_target,
        },
        runs,
        failures,
    })
}

/// Ordinary least squares on `(ln x, ln y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// The fitted `(ln x, ln y)` points.
    pub points: Vec<(f64, f64)>,
}

pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::Domain("need at least 3 points".into()));
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::Domain("all points must be strictly positive".into()));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("x values are all identical".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(ScalingFit {
        slope,
        intercept,
        r_squared,
        points: logs,
    })
}

/// Theoretical query-complexity bound for reaching accuracy `epsilon`.
///
/// Strongly convex:
/// `750 d L G_u^2 / (mu^2 eps) + 10 gap_1 ln(max(75 d L G_u^2 / (mu^2 eps), gap_1)) / (K(1/4||p) eps)`.
/// Nonconvex: `3 * 180^2 * gap_1 d L G_u^2 / eps^2 + 320 d G_u^2 / eps`.
#[allow(clippy::too_many_arguments)]
pub fn predicted_query_bounds(
    mode: Mode,
    d: usize,
    l: f64,
    mu: Option<f64>,
    g_upper: f64,
    epsilon: f64,
    initial_gap: f64,
    p: Option<f64>,
) -> Result<f64> {
    if d < 1 {
        return Err(Error::Domain("d must be >= 1".into()));
    }
    if l <= 0.0 || g_upper <= 0.0 || epsilon <= 0.0 || initial_gap <= 0.0 {
        return Err(Error::Domain(
            "constants must be strictly positive".into(),
        ));
    }
    let d = d as f64;
    match mode {
        Mode::StronglyConvexGap => {
            let mu = mu.ok_or_else(|| Error::Domain("mu required".into()))?;
            if mu <= 0.0 {
                return Err(Error::Domain("mu must be positive".into()));
            }
            let p = p.ok_or_else(|| Error::Domain("p required".into()))?;
            let k = kl_binary(0.25, p)?;
            let lead = 750.0 * d * l * g_upper * g_upper / (mu * mu * epsilon);
            let inner = (75.0 * d * l * g_upper * g_upper / (mu * mu * epsilon)).max(initial_gap);
            Ok(lead + 10.0 * initial_gap * inner.ln() / (k * epsilon))
        }
        Mode::NonconvexStationarity => {
            let lead =
                3.0 * 180.0 * 180.0 * initial_gap * d * l * g_upper * g_upper / (epsilon * epsilon);
            Ok(lead + 320.0 * d * g_upper * g_upper / epsilon)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_quadratic, NoiseSpec, StochasticProblem};

    fn small_spec() -> ExperimentSpec {
        ExperimentSpec {
            problem: ProblemSpec::Quadratic {
                dim: 3,
                lambda_min: 1.0,
                lambda_max: 2.0,
                noise_radius: 5.0,
                region_radius: 1.0,
            },
            sample_size: 8,
            horizon: 100,
            alpha: None,
            schedule: ScheduleSpec::StronglyConvex { mu: None },
            gradient_norm_scaling: true,
            seeds: vec![1, 2, 3, 4, 5],
            target_epsilon: None,
            mode: Mode::StronglyConvexGap,
            x1: None,
        }
    }

    #[test]
    fn run_experiment_is_deterministic() {
        let spec = small_spec();
        let a = run_experiment(&spec).unwrap();
        let b = run_experiment(&spec).unwrap();
        assert_eq!(a.summary, b.summary);
        assert_eq!(a.runs.len(), 5);
        assert!(a.failures.is_empty());
    }

    #[test]
    fn run_experiment_zero_horizon_empty_summary() {
        let mut spec = small_spec();
        spec.horizon = 0;
        spec.seeds = vec![1];
        let outcome = run_experiment(&spec).unwrap();
        assert!(outcome.summary.per_t.is_empty());
        assert_eq!(outcome.runs.len(), 1);
    }

    #[test]
    fn run_experiment_queries_match_sample_size() {
        let outcome = run_experiment(&small_spec()).unwrap();
        for rec in &outcome.summary.per_t {
            assert_eq!(rec.queries, 8 * rec.t as u64);
        }
    }

    #[test]
    fn seed_offset_shifts_every_seed() {
        let spec = small_spec();
        let a = run_experiment_with_offset(&spec, 100).unwrap();
        let seeds: Vec<u64> = a.runs.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, vec![101, 102, 103, 104, 105]);
    }

    #[test]
    fn fit_loglog_slope_exact_lines() {
        let pts: Vec<(f64, f64)> = (1..=10).map(|i| (i as f64, 7.0 * i as f64)).collect();
        let fit = fit_loglog_slope(&pts).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-9);
        let pts: Vec<(f64, f64)> = (1..=10)
            .map(|i| (i as f64, 3.0 / (i as f64 * i as f64)))
            .collect();
        let fit = fit_loglog_slope(&pts).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-9);
    }

    #[test]
    fn fit_loglog_slope_noisy_power_law() {
        // y = x^1.5 with +-5% alternating noise over a decade.
        let pts: Vec<(f64, f64)> = (0..12)
            .map(|i| {
                let x = 10.0f64.powf(i as f64 / 11.0);
                let noise = if i % 2 == 0 { 1.05 } else { 0.95 };
                (x, x.powf(1.5) * noise)
            })
            .collect();
        let fit = fit_loglog_slope(&pts).unwrap();
        assert!(fit.slope > 1.35 && fit.slope < 1.65, "slope {}", fit.slope);
    }

    #[test]
    fn fit_loglog_slope_rejects_bad_input() {
        assert!(fit_loglog_slope(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(fit_loglog_slope(&[(1.0, 1.0), (2.0, -2.0), (3.0, 3.0)]).is_err());
    }

    #[test]
    fn fit_slope_invariant_under_y_rescaling() {
        let pts: Vec<(f64, f64)> = (1..=8).map(|i| (i as f64, (i as f64).powf(1.3) * 2.0)).collect();
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x, 100.0 * y)).collect();
        let a = fit_loglog_slope(&pts).unwrap();
        let b = fit_loglog_slope(&scaled).unwrap();
        assert!((a.slope - b.slope).abs() < 1e-12);
        assert!((b.intercept - a.intercept - 100.0f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn predicted_query_bounds_substitution() {
        // Strongly convex leading term: 750 d L G_u^2 / (mu^2 eps) = 75000
        // for d=10, L=1, mu=1, G_u=1, eps=0.1. A vanishing initial gap kills
        // the second term.
        let q = predicted_query_bounds(
            Mode::StronglyConvexGap,
            10,
            1.0,
            Some(1.0),
            1.0,
            0.1,
            1e-300,
            Some(0.0224),
        )
        .unwrap();
        assert!((q - 75_000.0).abs() < 1e-6, "q = {q}");
        // Nonconvex second term: 320 d G_u^2 / eps = 32000; a vanishing gap
        // kills the leading term.
        let q = predicted_query_bounds(
            Mode::NonconvexStationarity,
            10,
            1.0,
            None,
            1.0,
            0.1,
            1e-300,
            None,
        )
        .unwrap();
        assert!((q - 32_000.0).abs() < 1e-6, "q = {q}");
    }

    #[test]
    fn predicted_query_bounds_epsilon_homogeneity() {
        let at = |eps: f64| {
            predicted_query_bounds(
                Mode::StronglyConvexGap,
                10,
                1.0,
                Some(1.0),
                1.0,
                eps,
                1e-300,
                Some(0.0224),
            )
            .unwrap()
        };
        assert!((at(0.05) / at(0.1) - 2.0).abs() < 1e-9);
        assert!(predicted_query_bounds(
            Mode::StronglyConvexGap,
            10,
            1.0,
            None,
            1.0,
            0.1,
            1.0,
            Some(0.0224)
        )
        .is_err());
    }

    #[test]
    fn baseline_converges_on_noiseless_quadratic() {
        let p = make_quadratic(2, 1.0, 1.0, NoiseSpec::SphereLinear { radius: 0.0 }, 2.0).unwrap();
        let x1 = [1.0, -1.0];
        let config = BaselineConfig {
            alpha: 1e-4,
            horizon: 2000,
            schedule: BaselineSchedule::InverseT {
                c: 1.0,
                mu: 1.0,
                t_shift: 2.0,
            },
            seed: 3,
        };
        let trace = baseline_two_point_zo(&p, &config, &x1).unwrap();
        let initial = trace.records[0].f_gap;
        let last = trace.records.last().unwrap();
        assert!(last.f_gap < 1e-2 * initial, "gap {}", last.f_gap);
        for r in &trace.records {
            assert_eq!(r.queries, 2 * r.t as u64);
        }
    }

    #[test]
    fn baseline_estimator_is_unbiased_for_small_alpha() {
        // Recover the estimator from a single constant-step update and
        // average over many seeds: the mean should approach grad f(x1).
        let p = make_quadratic(2, 1.0, 2.0, NoiseSpec::SphereLinear { radius: 0.0 }, 2.0).unwrap();
        let x1 = [1.0, 0.5];
        let eta = 1e-3;
        let trials = 2000;
        let mut mean = [0.0f64; 2];
        for seed in 0..trials {
            let config = BaselineConfig {
                alpha: 1e-5,
                horizon: 1,
                schedule: BaselineSchedule::Constant { eta },
                seed,
            };
            let trace = baseline_two_point_zo(&p, &config, &x1).unwrap();
            for i in 0..2 {
                mean[i] += (x1[i] - trace.final_point[i]) / eta;
            }
        }
        let grad = p.grad_true(&x1);
        for i in 0..2 {
            mean[i] /= trials as f64;
            // The per-coordinate variance of <g,u>u is at most 3|g|^2 for
            // standard Gaussian u; gate at 4 standard errors.
            let se = 3.0f64.sqrt() * vecops_norm(&grad) / (trials as f64).sqrt();
            assert!(
                (mean[i] - grad[i]).abs() < 4.0 * se,
                "coordinate {i}: {} vs {}",
                mean[i],
                grad[i]
            );
        }
    }

    fn vecops_norm(v: &[f64]) -> f64 {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    #[test]
    fn csv_round_trip() {
        let spec = small_spec();
        let outcome = run_experiment(&spec).unwrap();
        let csv = report::traces_to_csv(&outcome.runs);
        let parsed = report::parse_traces_csv(&csv).unwrap();
        assert_eq!(parsed.len(), outcome.runs.len());
        for (a, b) in parsed.iter().zip(&outcome.runs) {
            assert_eq!(a.run_id, b.run_id);
            assert_eq!(a.seed, b.seed);
            assert_eq!(a.trace.records, b.trace.records);
        }
        // Byte-identical on identical input.
        assert_eq!(csv, report::traces_to_csv(&outcome.runs));
    }

    #[test]
    fn csv_empty_is_header_only() {
        let csv = report::traces_to_csv(&[]);
        assert_eq!(csv, format!("{}\n", report::TRACE_CSV_HEADER));
        assert!(report::parse_traces_csv(&csv).unwrap().is_empty());
        assert!(report::parse_traces_csv("nonsense\n").is_err());
    }
}
