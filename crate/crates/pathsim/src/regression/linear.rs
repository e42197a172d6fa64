//! Ordinary, weighted, and ridge least squares, plus Huber-robust
//! regression by iteratively reweighted least squares.

use nalgebra::{DMatrix, DVector};

use crate::dataset::FeatureMatrix;
use crate::error::{Error, Result};

/// Coefficients plus intercept of an affine model.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineFit {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
}

impl AffineFit {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.intercept
            + row
                .iter()
                .zip(&self.coefficients)
                .map(|(x, c)| x * c)
                .sum::<f64>()
    }
}

fn design(x: &FeatureMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(x.rows, x.cols + 1, |r, c| {
        if c == 0 {
            1.0
        } else {
            x.get(r, c - 1)
        }
    })
}

/// Ordinary least squares via the normal equations and a Cholesky solve.
/// Rank-deficient systems are rejected with advice to use ridge.
pub fn ols(x: &FeatureMatrix, y: &[f64]) -> Result<AffineFit> {
    weighted_ols(x, y, None)
}

/// OLS with optional per-row weights (all weights must be >= 0).
pub fn weighted_ols(x: &FeatureMatrix, y: &[f64], weights: Option<&[f64]>) -> Result<AffineFit> {
    if x.rows != y.len() {
        return Err(Error::Domain(format!(
            "feature rows {} != target rows {}",
            x.rows,
            y.len()
        )));
    }
    if x.rows < x.cols + 1 {
        return Err(Error::Domain(format!(
            "need at least {} rows for {} features, got {}",
            x.cols + 1,
            x.cols,
            x.rows
        )));
    }
    let a = design(x);
    let yv = DVector::from_column_slice(y);
    let (ata, aty) = match weights {
        None => (a.transpose() * &a, a.transpose() * yv),
        Some(w) => {
            let mut wa = a.clone();
            let mut wy = yv;
            for r in 0..x.rows {
                let s = w[r].max(0.0).sqrt();
                wa.row_mut(r).scale_mut(s);
                wy[r] *= s;
            }
            (wa.transpose() * &wa, wa.transpose() * wy)
        }
    };
    let chol = ata
        .clone()
        .cholesky()
        .ok_or_else(|| Error::SingularFit("normal equations are rank deficient".into()))?;
    let beta = chol.solve(&aty);
    Ok(AffineFit {
        coefficients: beta.as_slice()[1..].to_vec(),
        intercept: beta[0],
    })
}

/// Ridge regression: minimizes `||y - Xb - b0||^2 + lambda ||b||^2`
/// with the intercept unpenalized. Features and target are centered
/// internally so the penalty never touches the intercept.
pub fn ridge(x: &FeatureMatrix, y: &[f64], lambda: f64) -> Result<AffineFit> {
    if lambda < 0.0 {
        return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
    }
    if x.rows != y.len() || x.rows == 0 {
        return Err(Error::Domain("empty or mismatched ridge inputs".into()));
    }
    let y_mean = y.iter().sum::<f64>() / y.len() as f64;
    let x_means: Vec<f64> = (0..x.cols)
        .map(|c| (0..x.rows).map(|r| x.get(r, c)).sum::<f64>() / x.rows as f64)
        .collect();
    let xm = DMatrix::from_fn(x.rows, x.cols, |r, c| x.get(r, c) - x_means[c]);
    let yc = DVector::from_iterator(y.len(), y.iter().map(|v| v - y_mean));
    let mut gram = xm.transpose() * &xm;
    for i in 0..x.cols {
        gram[(i, i)] += lambda;
    }
    let rhs = xm.transpose() * yc;
    let beta = match gram.clone().cholesky() {
        Some(chol) => chol.solve(&rhs),
        // lambda = 0 with collinear or constant columns: minimum-norm
        // least squares keeps predictions well defined.
        None => gram
            .svd(true, true)
            .solve(&rhs, 1e-12)
            .map_err(|e| Error::SingularFit(e.to_string()))?,
    };
    let intercept = y_mean
        - beta
            .iter()
            .zip(&x_means)
            .map(|(b, m)| b * m)
            .sum::<f64>();
    Ok(AffineFit {
        coefficients: beta.as_slice().to_vec(),
        intercept,
    })
}

/// Huber-loss regression via IRLS. `delta` is the loss transition point
/// in robust-scale units; the scale is re-estimated each iteration from
/// the median absolute residual.
pub fn huber_irls(
    x: &FeatureMatrix,
    y: &[f64],
    delta: f64,
    tol: f64,
    max_iter: usize,
) -> Result<AffineFit> {
    let mut fit = ols(x, y)?;
    let mut residual_norm = f64::INFINITY;
    for _ in 0..max_iter {
        let residuals: Vec<f64> = (0..x.rows)
            .map(|r| y[r] - fit.predict_row(x.row(r)))
            .collect();
        let scale = robust_scale(&residuals).max(1e-12);
        let weights: Vec<f64> = residuals
            .iter()
            .map(|r| {
                let z = (r / scale).abs();
                if z <= delta {
                    1.0
                } else {
                    delta / z
                }
            })
            .collect();
        let next = weighted_ols(x, y, Some(&weights))?;
        residual_norm = next
            .coefficients
            .iter()
            .zip(&fit.coefficients)
            .map(|(a, b)| (a - b).abs())
            .chain(std::iter::once((next.intercept - fit.intercept).abs()))
            .fold(0.0, f64::max);
        fit = next;
        if residual_norm <= tol * fit.coefficients.iter().fold(1.0_f64, |m, c| m.max(c.abs())) {
            return Ok(fit);
        }
    }
    Err(Error::ConvergenceFailure {
        iterations: max_iter,
        residual: residual_norm,
    })
}

/// MAD-based scale estimate, consistent for a Gaussian.
fn robust_scale(residuals: &[f64]) -> f64 {
    let mut abs: Vec<f64> = residuals.iter().map(|r| r.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let mid = abs.len() / 2;
    let mad = if abs.len() % 2 == 1 {
        abs[mid]
    } else {
        (abs[mid - 1] + abs[mid]) / 2.0
    };
    mad / 0.6745
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn line_data() -> (FeatureMatrix, Vec<f64>) {
        let x = FeatureMatrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0]]);
        let y = vec![1.0, 3.0, 5.0];
        (x, y)
    }

    #[test]
    fn ols_recovers_exact_line() {
        let (x, y) = line_data();
        let fit = ols(&x, &y).unwrap();
        assert_abs_diff_eq!(fit.coefficients[0], 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.intercept, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.predict_row(&[10.0]), 21.0, epsilon = 1e-9);
    }

    #[test]
    fn ols_rejects_duplicated_column() {
        let x = FeatureMatrix::from_rows(&[
            vec![1.0, 1.0],
            vec![2.0, 2.0],
            vec![3.0, 3.0],
            vec![4.0, 4.0],
        ]);
        let y = vec![1.0, 2.0, 3.0, 4.0];
        let err = ols(&x, &y).unwrap_err();
        assert!(matches!(err, Error::SingularFit(_)));
        assert!(err.to_string().contains("ridge"), "{err}");
    }

    #[test]
    fn ols_requires_enough_rows() {
        let x = FeatureMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert!(ols(&x, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn ridge_shrinks_toward_zero() {
        // Zero-mean single feature.
        let x = FeatureMatrix::from_rows(&[vec![-1.0], vec![0.0], vec![1.0]]);
        let y = vec![-2.0, 0.1, 2.0];
        let mut prev_norm = f64::INFINITY;
        for lambda in [0.0, 0.5, 1.0, 5.0, 50.0] {
            let fit = ridge(&x, &y, lambda).unwrap();
            let norm = fit.coefficients.iter().map(|c| c * c).sum::<f64>().sqrt();
            assert!(norm <= prev_norm + 1e-12);
            prev_norm = norm;
        }
    }

    #[test]
    fn ridge_zero_lambda_matches_ols_predictions() {
        let x = FeatureMatrix::from_rows(&[vec![-1.5], vec![-0.5], vec![0.5], vec![1.5]]);
        let y = vec![0.2, 1.1, 2.3, 2.9];
        let r = ridge(&x, &y, 0.0).unwrap();
        let o = ols(&x, &y).unwrap();
        for row in [[-1.5], [0.5], [3.0]] {
            assert_abs_diff_eq!(r.predict_row(&row), o.predict_row(&row), epsilon = 1e-8);
        }
    }

    #[test]
    fn huber_matches_ols_on_clean_line_and_resists_outlier() {
        let (x, y) = line_data();
        let fit = huber_irls(&x, &y, 1.35, 1e-8, 100).unwrap();
        assert_abs_diff_eq!(fit.coefficients[0], 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(fit.intercept, 1.0, epsilon = 1e-6);

        // A gross outlier drags OLS but barely moves the Huber fit.
        let x2 = FeatureMatrix::from_rows(&[
            vec![0.0],
            vec![1.0],
            vec![2.0],
            vec![3.0],
            vec![4.0],
            vec![5.0],
        ]);
        let y2 = vec![1.0, 3.0, 5.0, 7.0, 9.0, 60.0];
        let robust = huber_irls(&x2, &y2, 1.35, 1e-6, 500).unwrap();
        let plain = ols(&x2, &y2).unwrap();
        assert!((robust.coefficients[0] - 2.0).abs() < 0.5, "{robust:?}");
        assert!((plain.coefficients[0] - 2.0).abs() > 2.0, "{plain:?}");
    }
}
