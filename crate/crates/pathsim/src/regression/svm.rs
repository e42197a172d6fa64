//! Epsilon-insensitive support vector regression with an RBF kernel,
//! solved by sequential minimal optimization on the dual.
//!
//! Working-pair selection follows the maximal-violating-pair rule: the
//! duality-gap witness `b_low - b_up` both drives pair choice and serves
//! as the KKT residual reported at termination.

use serde::{Deserialize, Serialize};

use crate::dataset::FeatureMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub c: f64,
    pub epsilon: f64,
    /// RBF width; `None` selects `1 / (p * var(X))`.
    pub gamma: Option<f64>,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            epsilon: 0.1,
            gamma: None,
            tol: 1e-3,
            max_iter: 100_000,
        }
    }
}

/// Fitted SVR state: support vectors with dual coefficients
/// `beta_i = alpha_i - alpha_i*`, plus bias and kernel width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub support_vectors: FeatureMatrix,
    pub dual_coefficients: Vec<f64>,
    pub bias: f64,
    pub gamma: f64,
    /// `max(0, b_low - b_up)` when the solver stopped.
    pub kkt_residual: f64,
    pub iterations: usize,
}

impl SvmModel {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut sum = self.bias;
        for (i, beta) in self.dual_coefficients.iter().enumerate() {
            sum += beta * rbf(self.support_vectors.row(i), row, self.gamma);
        }
        sum
    }
}

fn rbf(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * sq).exp()
}

/// Overall feature variance, for the default gamma heuristic
/// `1 / (p * var)`.
fn overall_variance(x: &FeatureMatrix) -> f64 {
    let n = (x.rows * x.cols) as f64;
    let mean = x.data.iter().sum::<f64>() / n;
    x.data.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}

/// One dual variable's box state, viewed through its effect on
/// `beta_i = alpha_i - alpha_i*`.
struct DualState {
    alpha_up: Vec<f64>,   // alpha_i, pushes beta up
    alpha_down: Vec<f64>, // alpha_i*, pushes beta down
}

#[derive(Clone, Copy)]
enum Branch {
    /// Bound produced by alpha_i.
    Plus,
    /// Bound produced by alpha_i*.
    Minus,
}

pub fn fit_svr(x: &FeatureMatrix, y: &[f64], params: &SvmParams) -> Result<SvmModel> {
    if x.rows == 0 || x.rows != y.len() {
        return Err(Error::Domain("empty or mismatched SVR inputs".into()));
    }
    if params.c <= 0.0 {
        return Err(Error::Domain(format!("C must be > 0, got {}", params.c)));
    }
    if params.epsilon < 0.0 {
        return Err(Error::Domain(format!(
            "epsilon must be >= 0, got {}",
            params.epsilon
        )));
    }
    let gamma = match params.gamma {
        Some(g) if g > 0.0 => g,
        Some(g) => return Err(Error::Domain(format!("gamma must be > 0, got {g}"))),
        None => {
            let var = overall_variance(x);
            if var > 0.0 {
                1.0 / (x.cols as f64 * var)
            } else {
                1.0 / x.cols as f64
            }
        }
    };
    let n = x.rows;
    // Full kernel matrix; the scenario datasets are a few thousand rows.
    let mut kernel = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let k = rbf(x.row(i), x.row(j), gamma);
            kernel[i * n + j] = k;
            kernel[j * n + i] = k;
        }
    }

    let c = params.c;
    let eps = params.epsilon;
    let mut state = DualState {
        alpha_up: vec![0.0; n],
        alpha_down: vec![0.0; n],
    };
    // u_i = sum_j beta_j K_ij, maintained incrementally.
    let mut u = vec![0.0; n];

    let mut iterations = 0;
    let mut residual;
    loop {
        // Each sample exposes up to two directional derivatives of the
        // dual with respect to beta_i: u_i + eps - y_i when moving
        // through alpha_i, u_i - eps - y_i when moving through alpha*_i.
        // The maximal violating pair is the largest decrease-side
        // derivative against the smallest increase-side one.
        let mut b_up = f64::INFINITY;
        let mut b_low = f64::NEG_INFINITY;
        let mut up = (usize::MAX, Branch::Plus);
        let mut low = (usize::MAX, Branch::Plus);
        for i in 0..n {
            // Can increase beta_i.
            if state.alpha_up[i] < c {
                let g = u[i] + eps - y[i];
                if g < b_up {
                    b_up = g;
                    up = (i, Branch::Plus);
                }
            }
            if state.alpha_down[i] > 0.0 {
                let g = u[i] - eps - y[i];
                if g < b_up {
                    b_up = g;
                    up = (i, Branch::Minus);
                }
            }
            // Can decrease beta_i.
            if state.alpha_up[i] > 0.0 {
                let g = u[i] + eps - y[i];
                if g > b_low {
                    b_low = g;
                    low = (i, Branch::Plus);
                }
            }
            if state.alpha_down[i] < c {
                let g = u[i] - eps - y[i];
                if g > b_low {
                    b_low = g;
                    low = (i, Branch::Minus);
                }
            }
        }
        residual = (b_low - b_up).max(0.0);
        if residual <= params.tol || iterations >= params.max_iter {
            break;
        }
        let (i, low_branch) = low;
        let (j, up_branch) = up;

        // Decrease beta_i and increase beta_j by delta; second-order
        // optimal step, clipped to the box of the specific alpha that
        // produced each bound.
        let curv = (kernel[i * n + i] + kernel[j * n + j] - 2.0 * kernel[i * n + j]).max(1e-12);
        let room_i = match low_branch {
            Branch::Plus => state.alpha_up[i],
            Branch::Minus => c - state.alpha_down[i],
        };
        let room_j = match up_branch {
            Branch::Plus => c - state.alpha_up[j],
            Branch::Minus => state.alpha_down[j],
        };
        let delta = ((b_low - b_up) / curv).min(room_i).min(room_j);
        if delta <= 0.0 {
            break;
        }

        match low_branch {
            Branch::Plus => state.alpha_up[i] -= delta,
            Branch::Minus => state.alpha_down[i] += delta,
        }
        match up_branch {
            Branch::Plus => state.alpha_up[j] += delta,
            Branch::Minus => state.alpha_down[j] -= delta,
        }
        // The i == j case removes alpha/alpha* overlap; beta is unchanged
        // there and the kernel update below is a no-op.
        for t in 0..n {
            u[t] += delta * (kernel[j * n + t] - kernel[i * n + t]);
        }
        iterations += 1;
    }

    // Keep only samples with nonzero dual coefficient.
    let beta: Vec<f64> = (0..n)
        .map(|i| state.alpha_up[i] - state.alpha_down[i])
        .collect();
    let bias = {
        // Recompute the witness interval for the bias estimate.
        let mut b_up = f64::INFINITY;
        let mut b_low = f64::NEG_INFINITY;
        for i in 0..n {
            if state.alpha_up[i] < c {
                b_up = b_up.min(u[i] + eps - y[i]);
            }
            if state.alpha_down[i] > 0.0 {
                b_up = b_up.min(u[i] - eps - y[i]);
            }
            if state.alpha_up[i] > 0.0 {
                b_low = b_low.max(u[i] + eps - y[i]);
            }
            if state.alpha_down[i] < c {
                b_low = b_low.max(u[i] - eps - y[i]);
            }
        }
        -(b_low + b_up) / 2.0
    };
    let mut rows = Vec::new();
    let mut coefs = Vec::new();
    for i in 0..n {
        if beta[i] != 0.0 {
            rows.push(x.row(i).to_vec());
            coefs.push(beta[i]);
        }
    }
    Ok(SvmModel {
        support_vectors: FeatureMatrix::from_rows(&rows),
        dual_coefficients: coefs,
        bias,
        gamma,
        kkt_residual: residual,
        iterations,
    })
}
