//! Standard regression error metrics: MAE, MSE, RMSE, R2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One evaluation-table row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub mae: f64,
    pub mse: f64,
    pub rmse: f64,
    pub r2: f64,
}

/// MAE, MSE, and RMSE of the residuals. Always defined for nonempty
/// equal-length inputs.
pub fn error_metrics(target: &[f64], predictions: &[f64]) -> Result<(f64, f64, f64)> {
    if target.is_empty() || target.len() != predictions.len() {
        return Err(Error::Domain(format!(
            "target length {} and prediction length {} must be equal and nonzero",
            target.len(),
            predictions.len()
        )));
    }
    let n = target.len() as f64;
    let mut abs_sum = 0.0;
    let mut sq_sum = 0.0;
    for (y, p) in target.iter().zip(predictions) {
        let e = y - p;
        abs_sum += e.abs();
        sq_sum += e * e;
    }
    let mae = abs_sum / n;
    let mse = sq_sum / n;
    Ok((mae, mse, mse.sqrt()))
}

/// All four metrics. R2 is taken about the target mean; a zero-variance
/// target makes it undefined and is rejected (the error message still
/// carries the three defined metrics).
pub fn compute_metrics(target: &[f64], predictions: &[f64]) -> Result<MetricsReport> {
    let (mae, mse, rmse) = error_metrics(target, predictions)?;
    let n = target.len() as f64;
    let mean = target.iter().sum::<f64>() / n;
    let sst: f64 = target.iter().map(|y| (y - mean) * (y - mean)).sum();
    if sst == 0.0 {
        return Err(Error::Domain(format!(
            "R2 undefined: target variance is zero (MAE {mae}, MSE {mse}, RMSE {rmse})"
        )));
    }
    let sse = mse * n;
    Ok(MetricsReport {
        mae,
        mse,
        rmse,
        r2: 1.0 - sse / sst,
    })
}
