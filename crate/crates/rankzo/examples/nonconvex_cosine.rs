//! Drive the running average of |grad f|^2 to zero on a nonconvex objective.
//!
//! The problem is f(x) = |x|^2/2 + a * sum(cos(x_i) - 1) with a > 1, which
//! has a strict saddle at the origin. The fixed-horizon schedule targets the
//! averaged stationarity measure rather than the optimality gap.

use rankzo::bench::{run_experiment, ExperimentSpec, Mode, ProblemSpec, ScheduleSpec};
use rankzo::problems::{make_nonconvex_cosine, NoiseSpec, StochasticProblem};

fn main() -> rankzo::Result<()> {
    let dim = 20;
    let problem =
        make_nonconvex_cosine(dim, 2.0, NoiseSpec::SphereLinear { radius: 5.0 }, 1.0)?;
    println!(
        "coordinate minimizer s* = {:.6}, f* = {:.6}",
        problem.coordinate_minimizer(),
        problem.f_star()
    );
    let witness = problem.nonconvexity_witness();
    println!(
        "nonconvexity witness at the origin {:?}...: per-coordinate curvature 1 - a = {:.1}\n",
        &witness[..3],
        1.0 - problem.a()
    );

    // Start a little off the global minimizer and average over seeds.
    let mut x1 = problem.optimum().to_vec();
    x1[0] += 0.5;

    for horizon in [500usize, 1000, 2000, 4000] {
        let spec = ExperimentSpec {
            problem: ProblemSpec::NonconvexCosine {
                dim,
                a: 2.0,
                noise_radius: 5.0,
                region_radius: 1.0,
            },
            sample_size: 32,
            horizon,
            alpha: None,
            schedule: ScheduleSpec::FixedHorizon { eta_hat: None },
            gradient_norm_scaling: true,
            seeds: (1..=10).collect(),
            target_epsilon: None,
            mode: Mode::NonconvexStationarity,
            x1: Some(x1.clone()),
        };
        let outcome = run_experiment(&spec)?;
        let last = outcome.summary.per_t.last().unwrap();
        println!(
            "T = {horizon:>5}: median avg |grad|^2 = {:.6}  (IQR [{:.6}, {:.6}])",
            last.median, last.lower_quartile, last.upper_quartile
        );
    }
    Ok(())
}
