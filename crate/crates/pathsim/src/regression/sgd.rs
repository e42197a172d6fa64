//! Stochastic gradient descent for squared-loss linear regression.
//!
//! Per-sample updates on standardized features with the inverse-scaling
//! schedule `eta_t = eta0 / (1 + eta0 * lambda_s * t)` and seed-controlled
//! shuffling each epoch.

use rand::seq::SliceRandom;

use crate::dataset::FeatureMatrix;
use crate::error::{Error, Result};
use crate::regression::linear::AffineFit;
use crate::rng;

pub fn fit_sgd(
    x: &FeatureMatrix,
    y: &[f64],
    eta0: f64,
    schedule_lambda: f64,
    epochs: usize,
    seed: u64,
) -> Result<AffineFit> {
    if x.rows != y.len() || x.rows == 0 {
        return Err(Error::Domain("empty or mismatched SGD inputs".into()));
    }
    if eta0 <= 0.0 {
        return Err(Error::Domain(format!("eta0 must be > 0, got {eta0}")));
    }
    let mut beta = vec![0.0; x.cols];
    let mut intercept = 0.0;
    let mut order: Vec<usize> = (0..x.rows).collect();
    let mut stream = rng::derive_stream(seed, &[b'g' as u64]);
    let mut t = 0u64;
    for _ in 0..epochs {
        order.shuffle(&mut stream);
        for &i in &order {
            let eta = eta0 / (1.0 + eta0 * schedule_lambda * t as f64);
            let row = x.row(i);
            let pred = intercept
                + row
                    .iter()
                    .zip(&beta)
                    .map(|(xv, b)| xv * b)
                    .sum::<f64>();
            let err = pred - y[i];
            for (b, xv) in beta.iter_mut().zip(row) {
                *b -= eta * err * xv;
            }
            intercept -= eta * err;
            t += 1;
        }
    }
    let fit = AffineFit {
        coefficients: beta,
        intercept,
    };
    if fit.coefficients.iter().any(|c| !c.is_finite()) || !fit.intercept.is_finite() {
        return Err(Error::ConvergenceFailure {
            iterations: epochs,
            residual: f64::INFINITY,
        });
    }
    Ok(fit)
}

/// Analytic gradient of the mean squared-loss objective
/// `(1/2n) sum (x_i . b + b0 - y_i)^2`, as (d/db, d/db0). Used by the
/// finite-difference checks.
pub fn squared_loss_gradient(
    x: &FeatureMatrix,
    y: &[f64],
    beta: &[f64],
    intercept: f64,
) -> (Vec<f64>, f64) {
    let n = x.rows as f64;
    let mut grad = vec![0.0; x.cols];
    let mut grad0 = 0.0;
    for i in 0..x.rows {
        let row = x.row(i);
        let err = intercept + row.iter().zip(beta).map(|(xv, b)| xv * b).sum::<f64>() - y[i];
        for (g, xv) in grad.iter_mut().zip(row) {
            *g += err * xv / n;
        }
        grad0 += err / n;
    }
    (grad, grad0)
}

pub fn squared_loss(x: &FeatureMatrix, y: &[f64], beta: &[f64], intercept: f64) -> f64 {
    let n = x.rows as f64;
    (0..x.rows)
        .map(|i| {
            let row = x.row(i);
            let err =
                intercept + row.iter().zip(beta).map(|(xv, b)| xv * b).sum::<f64>() - y[i];
            err * err
        })
        .sum::<f64>()
        / (2.0 * n)
}
