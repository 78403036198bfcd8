//! The rank oracle: evaluate the N perturbed points under one shared noise
//! realization and return only their ascending ordering.
//!
//! The raw function values never leave this module — the optimizer is
//! rank-only by construction. The harness obtains true values through the
//! problem module, never through the oracle.

use crate::error::{Error, Result};
use crate::optimizer::DirectionSet;
use crate::problems::StochasticProblem;
use crate::vecops;

/// Ascending-value permutation of one oracle call.
///
/// `order[k]` is the (0-based) index of the (k+1)-th smallest value; ties
/// are broken by smaller original index first, so the ordering is a
/// deterministic function of the values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    order: Vec<usize>,
    iteration: usize,
}

impl Ranking {
    /// Builds a ranking from an explicit permutation, validating that it is
    /// a bijection on `{0, .., n-1}`.
    pub fn from_order(order: Vec<usize>, iteration: usize) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n || seen[i] {
                return Err(Error::Integrity(format!(
                    "order is not a permutation of 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(Ranking { order, iteration })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// The same ranking read worst-to-best.
    pub fn reversed(&self) -> Ranking {
        let mut order = self.order.clone();
        order.reverse();
        Ranking {
            order,
            iteration: self.iteration,
        }
    }
}

/// Counts every function evaluation an oracle performs.
#[derive(Debug, Clone, Default)]
pub struct QueryLedger {
    total_evaluations: u64,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn charge(&mut self, n: u64) {
        self.total_evaluations += n;
    }
}

/// Cumulative evaluations recorded by the ledger.
pub fn ledger_total(ledger: &QueryLedger) -> u64 {
    ledger.total_evaluations
}

/// Sorts indices ascending by value, ties broken by smaller index.
/// Internal so that tests can exercise the tie semantics without going
/// through a problem; values still never cross the module boundary.
fn ascending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    // Stable sort + total_cmp: equal values keep their original index order.
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    order
}

/// Evaluates `f(center + alpha * u_i; xi)` for every direction (same `xi`
/// for all of them), charges the ledger, and returns the ascending ordering.
pub fn rank_oracle(
    problem: &dyn StochasticProblem,
    center: &[f64],
    dirs: &DirectionSet,
    alpha: f64,
    xi: &[f64],
    ledger: &mut QueryLedger,
) -> Result<Ranking> {
    if alpha <= 0.0 {
        return Err(Error::Domain("alpha must be positive".into()));
    }
    if center.len() != problem.dim() || dirs.dim() != problem.dim() {
        return Err(Error::Config(format!(
            "dimension mismatch: problem dim {}, center {}, directions {}",
            problem.dim(),
            center.len(),
            dirs.dim()
        )));
    }
    let n = dirs.len();
    let mut values = Vec::with_capacity(n);
    let mut point = vec![0.0; center.len()];
    for (i, u) in dirs.iter().enumerate() {
        point.copy_from_slice(center);
        vecops::add_scaled(&mut point, alpha, u);
        let v = problem.eval_stoch(&point, xi);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                index: i,
                iteration: dirs.iteration(),
            });
        }
        values.push(v);
    }
    ledger.charge(n as u64);
    Ok(Ranking {
        order: ascending_order(&values),
        iteration: dirs.iteration(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascending_order_sorts_values() {
        assert_eq!(ascending_order(&[3.2, -1.0, 0.5]), vec![1, 2, 0]);
    }

    #[test]
    fn ties_break_by_original_index() {
        assert_eq!(ascending_order(&[1.0, 1.0, 0.0]), vec![2, 0, 1]);
    }

    #[test]
    fn monotone_transform_preserves_order() {
        let v = [0.3f64, -2.0, 1.7, 0.0, 5.1, -0.4];
        let t: Vec<f64> = v.iter().map(|x| x.exp()).collect();
        assert_eq!(ascending_order(&v), ascending_order(&t));
    }
}
