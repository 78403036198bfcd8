//! Compare the rank-based method against a tuned two-point finite-difference
//! SGD baseline on the same noisy quadratic, by oracle queries to target.
//!
//! The baseline sees function values (2 per iteration); the rank method only
//! sees orderings (N per iteration). The printed ratio is the honest price
//! of comparison feedback on this problem.

use rankzo::bench::{run_experiment, tune_baseline, ExperimentSpec, Mode, ProblemSpec, ScheduleSpec};

fn main() -> rankzo::Result<()> {
    let dim = 20;
    let problem_spec = ProblemSpec::Quadratic {
        dim,
        lambda_min: 1.0,
        lambda_max: 10.0,
        noise_radius: 15.0,
        region_radius: 1.0,
    };
    let mut x1 = vec![0.0; dim];
    x1[0] = 1.0; // initial gap = lambda_min / 2 = 0.5
    let epsilon = 0.05;

    let spec = ExperimentSpec {
        problem: problem_spec.clone(),
        sample_size: 32,
        horizon: 8000,
        alpha: None,
        schedule: ScheduleSpec::StronglyConvex { mu: None },
        gradient_norm_scaling: true,
        seeds: (1..=10).collect(),
        target_epsilon: Some(epsilon),
        mode: Mode::StronglyConvexGap,
        x1: Some(x1.clone()),
    };
    let outcome = run_experiment(&spec)?;
    let rank_queries = outcome
        .summary
        .queries_to_target
        .expect("rank method should reach the target");
    println!("rank method: {rank_queries} queries to median gap <= {epsilon}");

    let problem = problem_spec.build()?;
    let (tuning, trace) = tune_baseline(problem.as_ref(), 1e-3, 200_000, 1, &x1)?;
    println!(
        "baseline step-size grid {:?} -> final gaps {:?}",
        tuning.grid, tuning.final_gaps
    );
    match trace.records.iter().find(|r| r.f_gap <= epsilon) {
        Some(r) => {
            println!(
                "baseline (c = {}): {} queries to gap <= {epsilon}",
                tuning.best_c, r.queries
            );
            println!(
                "query ratio rank / baseline: {:.2}",
                rank_queries as f64 / r.queries as f64
            );
        }
        None => println!("baseline did not reach the target within its budget"),
    }
    Ok(())
}
