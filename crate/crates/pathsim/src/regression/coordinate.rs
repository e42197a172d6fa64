//! Coordinate-descent solver for lasso and elastic net.
//!
//! Minimizes, over zero-mean features,
//!
//! ```text
//! (1/2n) ||y - Xb - b0||^2 + lambda * (mix * ||b||_1 + (1 - mix)/2 * ||b||_2^2)
//! ```
//!
//! with the intercept unpenalized. `mix = 1` is the lasso, `mix = 0` pure
//! ridge. Each sweep soft-thresholds every coordinate in turn; the solver
//! stops when the largest coefficient update falls below tolerance.

use crate::dataset::FeatureMatrix;
use crate::error::{Error, Result};
use crate::regression::linear::AffineFit;

fn soft_threshold(z: f64, gamma: f64) -> f64 {
    if z > gamma {
        z - gamma
    } else if z < -gamma {
        z + gamma
    } else {
        0.0
    }
}

/// Smallest penalty that zeroes every lasso coefficient:
/// `max_j |x_j . (y - mean(y))| / n`.
pub fn lasso_lambda_max(x: &FeatureMatrix, y: &[f64]) -> f64 {
    let n = y.len() as f64;
    let y_mean = y.iter().sum::<f64>() / n;
    (0..x.cols)
        .map(|j| {
            (0..x.rows)
                .map(|r| x.get(r, j) * (y[r] - y_mean))
                .sum::<f64>()
                .abs()
                / n
        })
        .fold(0.0, f64::max)
}

pub fn elastic_net(
    x: &FeatureMatrix,
    y: &[f64],
    lambda: f64,
    mix: f64,
    tol: f64,
    max_sweeps: usize,
) -> Result<AffineFit> {
    if lambda < 0.0 {
        return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
    }
    if !(0.0..=1.0).contains(&mix) {
        return Err(Error::Domain(format!("mixing must be in [0, 1], got {mix}")));
    }
    if x.rows != y.len() || x.rows == 0 {
        return Err(Error::Domain("empty or mismatched inputs".into()));
    }
    let n = x.rows as f64;
    let y_mean = y.iter().sum::<f64>() / n;
    // Features are standardized (zero mean) by the caller, so the
    // unpenalized intercept is just mean(y).
    let intercept = y_mean;

    let col_sq: Vec<f64> = (0..x.cols)
        .map(|j| (0..x.rows).map(|r| x.get(r, j) * x.get(r, j)).sum::<f64>())
        .collect();
    let mut beta = vec![0.0; x.cols];
    // residual r_i = y_i - y_mean - x_i . beta, maintained incrementally
    let mut residual: Vec<f64> = y.iter().map(|v| v - y_mean).collect();

    let l1 = lambda * mix;
    let l2 = lambda * (1.0 - mix);
    let mut max_delta = f64::INFINITY;
    for _ in 0..max_sweeps {
        max_delta = 0.0;
        for j in 0..x.cols {
            if col_sq[j] == 0.0 {
                continue;
            }
            let old = beta[j];
            // rho = (1/n) x_j . (r + x_j * beta_j)
            let rho = (0..x.rows)
                .map(|r| x.get(r, j) * (residual[r] + x.get(r, j) * old))
                .sum::<f64>()
                / n;
            let new = soft_threshold(rho, l1) / (col_sq[j] / n + l2);
            if new != old {
                for r in 0..x.rows {
                    residual[r] -= x.get(r, j) * (new - old);
                }
                max_delta = max_delta.max((new - old).abs());
                beta[j] = new;
            }
        }
        if max_delta <= tol {
            return Ok(AffineFit {
                coefficients: beta,
                intercept,
            });
        }
    }
    Err(Error::ConvergenceFailure {
        iterations: max_sweeps,
        residual: max_delta,
    })
}

pub fn lasso(
    x: &FeatureMatrix,
    y: &[f64],
    lambda: f64,
    tol: f64,
    max_sweeps: usize,
) -> Result<AffineFit> {
    elastic_net(x, y, lambda, 1.0, tol, max_sweeps)
}
