//! Empirically certify the declared problem constants by sampling the
//! region: gradient norm bounds (upper and lower) and smoothness.
//!
//! Also shows the derived quantities the optimizer builds from those
//! constants: the dimension factor C_{d,delta}, the smoothing radius, and
//! the recommended batch size.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rankzo::optimizer::{c_d_delta, recommended_sample_size, smoothing_parameter};
use rankzo::problems::{certify_constants, make_quadratic, NoiseSpec, StochasticProblem};

fn main() -> rankzo::Result<()> {
    let problem = make_quadratic(
        20,
        1.0,
        10.0,
        NoiseSpec::SphereLinear { radius: 15.0 },
        1.0,
    )?;
    let constants = problem.constants();
    println!(
        "declared: L = {}, mu = {:?}, G_upper = {}, G_lower = {:?}, R = {}",
        constants.l, constants.mu, constants.g_upper, constants.g_lower, constants.region_radius
    );

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let report = certify_constants(&problem, 100_000, &mut rng)?;
    println!(
        "observed over 100000 region samples: max |grad| = {:.4}, min |grad| = {:.4}, max smoothness ratio = {:.4}",
        report.max_grad_stoch_norm, report.min_grad_stoch_norm, report.max_smoothness_ratio
    );

    // Derived quantities for a horizon-1000 run with batch size 32.
    let (n, t) = (32usize, 1000usize);
    let delta = 1.0 / (20.0 * (n * t) as f64);
    let c = c_d_delta(problem.dim(), delta)?;
    println!("\nC_(d,delta) at d = 20, delta = 1/(20NT): {c:.4}");
    let alpha = smoothing_parameter(constants.g_lower.unwrap(), constants.l, c)?;
    println!("default smoothing radius alpha: {alpha:.6}");
    println!(
        "recommended batch size for T = 1000: {}",
        recommended_sample_size(1000, rankzo::verify::ANALYSIS_TAIL_P)?
    );
    Ok(())
}
