//! Thin CLI over the library: run experiments, run the verification suite,
//! fit scaling laws, and compare against the two-point baseline.
//!
//! Exit codes: 0 on success, 1 when any verification or target check fails,
//! 2 on configuration errors.

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rankzo::bench::{
    emit_report, fit_loglog_slope, run_experiment_with_offset, tune_baseline, ExperimentSpec,
    Mode, ProblemSpec, ReportFormat,
};
use rankzo::error::Error;
use rankzo::problems::{certify_constants, make_quadratic, NoiseSpec};
use rankzo::verify;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rankzo", about = "Rank-based zeroth-order optimization harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment spec and write traces.csv + summary.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Added to every seed in the spec.
        #[arg(long, default_value_t = 0)]
        seed_offset: u64,
    },
    /// Run the Monte Carlo verification suite (all checks or one by name).
    Verify {
        /// One of: order_statistics, vector_norm, direction_norm,
        /// direction_norm_mean, scalar_gaussian, descent_sum,
        /// recursion_unroll, sequence_rate, convexity_bounds.
        #[arg(long)]
        check: Option<String>,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep dimension or target accuracy and fit the query scaling law.
    Scaling {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = ["dim", "epsilon"])]
        sweep: String,
        /// Comma-separated sweep values.
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank method vs the tuned two-point baseline on the same problem.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Iteration budget for the baseline (it pays 2 queries/iteration).
        #[arg(long, default_value_t = 400_000)]
        baseline_horizon: usize,
        /// Finite-difference radius for the baseline estimator.
        #[arg(long, default_value_t = 1e-3)]
        baseline_alpha: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            out,
            seed_offset,
        } => cmd_run(&config, &out, seed_offset),
        Command::Verify {
            check,
            trials,
            seed,
            out,
        } => cmd_verify(check.as_deref(), trials, seed, &out),
        Command::Scaling {
            config,
            sweep,
            values,
            out,
        } => cmd_scaling(&config, &sweep, &values, &out),
        Command::Compare {
            config,
            out,
            baseline_horizon,
            baseline_alpha,
        } => cmd_compare(&config, &out, baseline_horizon, baseline_alpha),
    };
    match result {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn cmd_run(config: &Path, out: &Path, seed_offset: u64) -> rankzo::Result<bool> {
    let spec = ExperimentSpec::from_json_file(config)?;
    let outcome = run_experiment_with_offset(&spec, seed_offset)?;
    std::fs::create_dir_all(out)?;
    emit_report(
        &outcome.runs,
        &outcome.summary,
        &out.join("traces.csv"),
        ReportFormat::Csv,
    )?;
    emit_report(
        &outcome.runs,
        &outcome.summary,
        &out.join("summary.json"),
        ReportFormat::Json,
    )?;
    for (seed, msg) in &outcome.failures {
        eprintln!("seed {seed} failed: {msg}");
    }
    // A target, when set, is a check: fail the run when it is not reached.
    let target_ok = match (spec.target_epsilon, spec.mode) {
        (Some(_), Mode::StronglyConvexGap) => outcome.summary.queries_to_target.is_some(),
        _ => true,
    };
    Ok(outcome.failures.is_empty() && target_ok)
}

fn cmd_verify(
    check: Option<&str>,
    trials: usize,
    seed: u64,
    out: &Path,
) -> rankzo::Result<bool> {
    let all = [
        "order_statistics",
        "vector_norm",
        "direction_norm",
        "direction_norm_mean",
        "scalar_gaussian",
        "descent_sum",
        "recursion_unroll",
        "sequence_rate",
        "convexity_bounds",
    ];
    let selected: Vec<&str> = match check {
        Some(name) => {
            if !all.contains(&name) {
                return Err(Error::Config(format!("unknown check '{name}'")));
            }
            vec![name]
        }
        None => all.to_vec(),
    };

    let mut reports = serde_json::Map::new();
    let mut all_pass = true;
    for name in selected {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (pass, value) = run_check(name, trials, &mut rng)?;
        all_pass &= pass;
        println!("{name}: {}", if pass { "pass" } else { "FAIL" });
        reports.insert(name.to_string(), value);
    }
    let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(reports))
        .map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    std::fs::write(out, text)?;
    Ok(all_pass)
}

/// Runs one named check with its canonical parameters and returns
/// (pass, JSON report).
fn run_check(
    name: &str,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> rankzo::Result<(bool, serde_json::Value)> {
    fn to_value<T: serde::Serialize>(v: &T) -> serde_json::Value {
        serde_json::to_value(v).expect("report serialization")
    }

    Ok(match name {
        "order_statistics" => {
            let r = verify::mc_order_statistics_event(64, trials, rng)?;
            (r.pass, to_value(&r))
        }
        "vector_norm" => {
            let r = verify::mc_vector_norm_bound(50, 0.05, trials, rng)?;
            (r.pass, to_value(&r))
        }
        "direction_norm" => {
            let r = verify::mc_direction_norm_bound(32, 20, 0.05, trials, rng)?;
            (r.pass, to_value(&r))
        }
        "direction_norm_mean" => {
            let r = verify::mc_direction_norm_mean(32, 20, trials, rng)?;
            let pass = (r.empirical_mean - r.expected_mean).abs() <= 0.05 * r.expected_mean;
            (pass, to_value(&r))
        }
        "scalar_gaussian" => {
            let r = verify::mc_scalar_gaussian_bounds(2.0, 100, 0.1, trials, rng)?;
            (r.tail.pass && r.max_abs.pass, to_value(&r))
        }
        "descent_sum" => {
            let r = verify::mc_descent_sum_bound(64, 50, trials, rng)?;
            (r.pass, to_value(&r))
        }
        "recursion_unroll" => {
            let mut ok = true;
            for _ in 0..1000 {
                let len = 1 + rand::Rng::gen_range(rng, 0..50usize);
                let rhos: Vec<f64> =
                    (0..len).map(|_| rand::Rng::gen_range(rng, 0.0..2.0)).collect();
                let betas: Vec<f64> =
                    (0..len).map(|_| rand::Rng::gen_range(rng, 0.0..1.0)).collect();
                let d1 = rand::Rng::gen_range(rng, 0.0..5.0);
                ok &= verify::check_recursion_unroll(&rhos, &betas, d1)?;
            }
            (ok, serde_json::json!({ "sequences": 1000, "pass": ok }))
        }
        "sequence_rate" => {
            let mut ok = true;
            for _ in 0..100 {
                let b = rand::Rng::gen_range(rng, 0.0..5.0);
                let c = rand::Rng::gen_range(rng, 0.0..5.0);
                ok &= verify::check_sequence_rate(b, c, 200)?;
            }
            (ok, serde_json::json!({ "pairs": 100, "horizon": 200, "pass": ok }))
        }
        "convexity_bounds" => {
            let problem = make_quadratic(
                10,
                1.0,
                4.0,
                NoiseSpec::SphereLinear { radius: 10.0 },
                1.0,
            )?;
            let ok = verify::check_convexity_bounds(&problem, 1000, rng)?;
            let cert = certify_constants(&problem, trials.max(1000), rng)?;
            (ok, serde_json::json!({ "pass": ok, "certification": cert }))
        }
        other => return Err(Error::Config(format!("unknown check '{other}'"))),
    })
}

fn cmd_scaling(config: &Path, sweep: &str, values: &[f64], out: &Path) -> rankzo::Result<bool> {
    if values.len() < 3 {
        return Err(Error::Config("need at least 3 sweep values".into()));
    }
    let base = ExperimentSpec::from_json_file(config)?;
    std::fs::create_dir_all(out)?;

    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut rows = Vec::new();
    let mut all_reached = true;
    match sweep {
        "dim" => {
            for &v in values {
                let d = v as usize;
                if d < 1 || (v - d as f64).abs() > 1e-9 {
                    return Err(Error::Config(format!("bad dimension value {v}")));
                }
                let mut spec = base.clone();
                set_dim(&mut spec.problem, d)?;
                // sample_size 0 in the config means "scale with dimension".
                if base.sample_size == 0 {
                    spec.sample_size = 4 * d;
                }
                spec.x1 = None; // re-derive the start point in the new dimension
                if spec.target_epsilon.is_none() {
                    let resolved = spec.resolve()?;
                    spec.target_epsilon = Some(0.1 * resolved.initial_gap);
                }
                let outcome = run_experiment_with_offset(&spec, 0)?;
                match outcome.summary.queries_to_target {
                    Some(q) => {
                        points.push((d as f64, q as f64));
                        rows.push(serde_json::json!({
                            "dim": d, "queries": q,
                            "target_epsilon": spec.target_epsilon,
                        }));
                    }
                    None => {
                        all_reached = false;
                        rows.push(serde_json::json!({
                            "dim": d, "queries": null,
                            "target_epsilon": spec.target_epsilon,
                        }));
                    }
                }
            }
        }
        "epsilon" => {
            // One experiment; read off the first crossing per target.
            let outcome = run_experiment_with_offset(&base, 0)?;
            for &eps in values {
                if eps <= 0.0 {
                    return Err(Error::Config("epsilon values must be positive".into()));
                }
                let hit = outcome
                    .summary
                    .per_t
                    .iter()
                    .find(|r| r.median <= eps)
                    .map(|r| r.queries);
                match hit {
                    Some(q) => {
                        points.push((1.0 / eps, q as f64));
                        rows.push(serde_json::json!({ "epsilon": eps, "queries": q }));
                    }
                    None => {
                        all_reached = false;
                        rows.push(serde_json::json!({ "epsilon": eps, "queries": null }));
                    }
                }
            }
        }
        other => return Err(Error::Config(format!("unknown sweep '{other}'"))),
    }

    let fit = if points.len() >= 3 {
        Some(fit_loglog_slope(&points)?)
    } else {
        None
    };
    let report = serde_json::json!({
        "sweep": sweep,
        "rows": rows,
        "fit": fit,
        "all_targets_reached": all_reached,
    });
    let mut text =
        serde_json::to_string_pretty(&report).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    std::fs::write(out.join("scaling.json"), text)?;
    if let Some(f) = &fit {
        println!("{sweep} scaling slope: {:.4} (r^2 = {:.4})", f.slope, f.r_squared);
    }
    Ok(all_reached)
}

fn set_dim(problem: &mut ProblemSpec, d: usize) -> rankzo::Result<()> {
    match problem {
        ProblemSpec::Quadratic { dim, .. } => *dim = d,
        ProblemSpec::NonconvexCosine { dim, .. } => *dim = d,
    }
    Ok(())
}

fn cmd_compare(
    config: &Path,
    out: &Path,
    baseline_horizon: usize,
    baseline_alpha: f64,
) -> rankzo::Result<bool> {
    let spec = ExperimentSpec::from_json_file(config)?;
    if spec.mode != Mode::StronglyConvexGap {
        return Err(Error::Config(
            "compare needs a strongly_convex_gap experiment".into(),
        ));
    }
    let eps = spec
        .target_epsilon
        .ok_or_else(|| Error::Config("compare needs target_epsilon".into()))?;
    std::fs::create_dir_all(out)?;

    let outcome = run_experiment_with_offset(&spec, 0)?;
    let rank_queries = outcome.summary.queries_to_target;

    let resolved = spec.resolve()?;
    let (tuning, trace) = tune_baseline(
        resolved.problem.as_ref(),
        baseline_alpha,
        baseline_horizon,
        spec.seeds[0],
        &resolved.x1,
    )?;
    let baseline_queries = trace
        .records
        .iter()
        .find(|r| r.f_gap <= eps)
        .map(|r| r.queries);

    let ratio = match (rank_queries, baseline_queries) {
        (Some(a), Some(b)) if b > 0 => Some(a as f64 / b as f64),
        _ => None,
    };
    let report = serde_json::json!({
        "target_epsilon": eps,
        "rank_queries_to_target": rank_queries,
        "baseline_queries_to_target": baseline_queries,
        "query_ratio_rank_over_baseline": ratio,
        "baseline_tuning": tuning,
    });
    let mut text =
        serde_json::to_string_pretty(&report).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    std::fs::write(out.join("compare.json"), text)?;
    println!(
        "rank: {rank_queries:?} queries, baseline: {baseline_queries:?} queries, ratio: {ratio:?}"
    );
    Ok(rank_queries.is_some() && baseline_queries.is_some())
}
