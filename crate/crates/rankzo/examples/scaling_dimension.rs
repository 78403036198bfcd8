//! Measure how the query count to reach a fixed relative accuracy grows
//! with dimension, and fit the log-log slope.
//!
//! The batch size per iteration is set to 4d, but queries-to-target is
//! insensitive to that choice; the interesting quantity is the total number
//! of oracle queries, which should grow roughly linearly in d.

use rankzo::bench::{fit_loglog_slope, run_experiment, ExperimentSpec, Mode, ProblemSpec, ScheduleSpec};

fn main() -> rankzo::Result<()> {
    let mut points = Vec::new();
    for dim in [10usize, 20, 40] {
        // Starting at R/sqrt(d) per coordinate gives gap = mean eigenvalue / 2
        // = 2.75 for eigenvalues linearly spaced in [1, 10], for every d.
        let spec = ExperimentSpec {
            problem: ProblemSpec::Quadratic {
                dim,
                lambda_min: 1.0,
                lambda_max: 10.0,
                noise_radius: 15.0,
                region_radius: 1.0,
            },
            sample_size: 4 * dim,
            horizon: 6000,
            alpha: None,
            schedule: ScheduleSpec::StronglyConvex { mu: None },
            gradient_norm_scaling: true,
            seeds: (1..=10).collect(),
            target_epsilon: Some(0.275),
            mode: Mode::StronglyConvexGap,
            x1: Some(vec![1.0 / (dim as f64).sqrt(); dim]),
        };
        let outcome = run_experiment(&spec)?;
        match outcome.summary.queries_to_target {
            Some(q) => {
                println!("d = {dim:>3}: {q:>9} queries to reach 10% of the initial gap");
                points.push((dim as f64, q as f64));
            }
            None => println!("d = {dim:>3}: target not reached within the horizon"),
        }
    }
    let fit = fit_loglog_slope(&points)?;
    println!(
        "\nlog-log fit: queries ~ d^{:.3} (r^2 = {:.3})",
        fit.slope, fit.r_squared
    );
    Ok(())
}
