//! Monte Carlo checks of the probabilistic claims behind the analysis.
//!
//! Each check estimates an event frequency and compares it against the
//! claimed bound with a 3-sigma binomial slack. Two of the claims fail
//! here — the measured frequencies are printed so you can see by how much.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rankzo::verify;

fn main() -> rankzo::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let trials = 20_000;

    let r = verify::mc_order_statistics_event(64, trials, &mut rng)?;
    println!(
        "order-statistics event (N = 64): freq {:.4} vs claimed lower bound {:.4} -> {}",
        r.empirical_freq,
        r.theoretical_bound,
        verdict(r.pass)
    );

    let r = verify::mc_vector_norm_bound(50, 0.05, trials, &mut rng)?;
    println!(
        "per-direction norm, correct form (d = 50, delta = 0.05): viol {:.4} vs {:.4} -> {}",
        r.empirical_freq,
        r.theoretical_bound,
        verdict(r.pass)
    );

    let r = verify::mc_direction_norm_bound(32, 20, 0.05, trials, &mut rng)?;
    println!(
        "descent-direction norm, claimed form (N = 32, d = 20): viol {:.4} vs {:.4} -> {}",
        r.empirical_freq,
        r.theoretical_bound,
        verdict(r.pass)
    );

    let r = verify::mc_direction_norm_mean(32, 20, trials, &mut rng)?;
    println!(
        "E|d_t|^2 (N = 32, d = 20): measured {:.4}, exact 8d/N = {:.4}",
        r.empirical_mean, r.expected_mean
    );

    let r = verify::mc_descent_sum_bound(64, 50, trials, &mut rng)?;
    println!(
        "ranked descent sum <= -N (N = 64): freq {:.4} vs claimed lower bound {:.4} -> {}",
        r.empirical_freq,
        r.theoretical_bound,
        verdict(r.pass)
    );

    let r = verify::mc_scalar_gaussian_bounds(2.0, 100, 0.1, trials, &mut rng)?;
    println!(
        "scalar tails (tau = 2): single {:.4} <= {:.4} -> {}, max-of-100 {:.4} <= 0.1 -> {}",
        r.tail.empirical_freq,
        r.tail.theoretical_bound,
        verdict(r.tail.pass),
        r.max_abs.empirical_freq,
        verdict(r.max_abs.pass)
    );

    println!(
        "\nKL divergence K(1/4 || 0.0224) = {:.6} (sets the sample-size rule)",
        verify::kl_binary(0.25, verify::ANALYSIS_TAIL_P)?
    );
    Ok(())
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}
