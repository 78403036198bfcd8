//! Rank-based zeroth-order stochastic optimization.
//!
//! The optimizer probes an objective only through a rank oracle: each
//! iteration perturbs the current point along `N` Gaussian directions,
//! observes the *ordering* of the perturbed values under one shared noise
//! realization, and recombines the best and worst quartiles of directions
//! into a descent step. Besides the optimizer ([`optimizer`]) the crate
//! ships stochastic test problems with certified constants ([`problems`]),
//! a Monte Carlo verification suite for the concentration bounds the
//! method's analysis rests on ([`verify`]), and a benchmark harness with
//! scaling-law fits and a value-based two-point baseline ([`bench`]).
//!
//! See the crate examples for runnable entry points to each capability.

pub mod bench;
pub mod error;
pub mod optimizer;
pub mod oracle;
pub mod problems;
pub mod verify;

pub use error::{Error, Result};

/// Small dense-vector helpers shared across modules.
pub(crate) mod vecops {
    pub fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    pub fn norm_sq(a: &[f64]) -> f64 {
        dot(a, a)
    }

    pub fn norm(a: &[f64]) -> f64 {
        norm_sq(a).sqrt()
    }

    /// x += s * y
    pub fn add_scaled(x: &mut [f64], s: f64, y: &[f64]) {
        for (xi, yi) in x.iter_mut().zip(y) {
            *xi += s * yi;
        }
    }
}
