//! The nine regression models and their evaluation.
//!
//! Standardization policy: the penalized linear models, the polynomial
//! expansion, SGD, and the SVR all fit on z-scored features (statistics
//! from the training set, stored inside the model). Plain linear, Huber
//! robust, and the random forest train on raw features.

pub mod coordinate;
pub mod forest;
pub mod linear;
pub mod metrics;
pub mod polynomial;
pub mod sgd;
pub mod svm;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{FeatureMatrix, Standardizer};
use crate::error::{Error, Result};
use crate::rng;

pub use forest::{Forest, ForestParams};
pub use linear::AffineFit;
pub use metrics::{compute_metrics, error_metrics, MetricsReport};
pub use svm::{SvmModel, SvmParams};

/// The nine model families, in the fixed report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegressorKind {
    Linear,
    Robust,
    Ridge,
    Lasso,
    ElasticNet,
    Polynomial,
    Sgd,
    RandomForest,
    Svm,
}

impl RegressorKind {
    pub const ALL: [RegressorKind; 9] = [
        RegressorKind::Linear,
        RegressorKind::Robust,
        RegressorKind::Ridge,
        RegressorKind::Lasso,
        RegressorKind::ElasticNet,
        RegressorKind::Polynomial,
        RegressorKind::Sgd,
        RegressorKind::RandomForest,
        RegressorKind::Svm,
    ];

    /// Report label, matching the published table rows.
    pub fn label(&self) -> &'static str {
        match self {
            RegressorKind::Linear => "Linear Regression",
            RegressorKind::Robust => "Robust Regression",
            RegressorKind::Ridge => "Ridge Regression",
            RegressorKind::Lasso => "LASSO Regression",
            RegressorKind::ElasticNet => "Elastic Net",
            RegressorKind::Polynomial => "Polynomial Regression",
            RegressorKind::Sgd => "SGD",
            RegressorKind::RandomForest => "RF Regressor",
            RegressorKind::Svm => "SVM Regressor",
        }
    }

    pub fn cli_name(&self) -> &'static str {
        match self {
            RegressorKind::Linear => "linear",
            RegressorKind::Robust => "robust",
            RegressorKind::Ridge => "ridge",
            RegressorKind::Lasso => "lasso",
            RegressorKind::ElasticNet => "elasticnet",
            RegressorKind::Polynomial => "polynomial",
            RegressorKind::Sgd => "sgd",
            RegressorKind::RandomForest => "rf",
            RegressorKind::Svm => "svm",
        }
    }
}

impl FromStr for RegressorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<RegressorKind> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(RegressorKind::Linear),
            "robust" => Ok(RegressorKind::Robust),
            "ridge" => Ok(RegressorKind::Ridge),
            "lasso" => Ok(RegressorKind::Lasso),
            "elasticnet" | "elastic-net" | "enet" => Ok(RegressorKind::ElasticNet),
            "polynomial" | "poly" => Ok(RegressorKind::Polynomial),
            "sgd" => Ok(RegressorKind::Sgd),
            "rf" | "randomforest" | "random-forest" => Ok(RegressorKind::RandomForest),
            "svm" | "svr" => Ok(RegressorKind::Svm),
            other => {
                let valid: Vec<&str> = RegressorKind::ALL.iter().map(|k| k.cli_name()).collect();
                Err(Error::Usage(format!(
                    "unknown model {other:?}; valid kinds: {}",
                    valid.join(", ")
                )))
            }
        }
    }
}

impl fmt::Display for RegressorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One model family with its hyperparameters and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressorSpec {
    pub kind: RegressorKind,
    pub hyper: Hyper,
    /// Seed for the stochastic kinds (SGD shuffling, forest bootstrap).
    pub seed: u64,
}

/// Per-kind hyperparameters; fields irrelevant to a kind are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyper {
    pub ridge_lambda: f64,
    pub lasso_lambda: f64,
    pub elastic_lambda: f64,
    pub elastic_mixing: f64,
    pub cd_tol: f64,
    pub cd_max_sweeps: usize,
    pub huber_delta: f64,
    pub huber_tol: f64,
    pub huber_max_iter: usize,
    pub poly_degree: usize,
    pub sgd_eta0: f64,
    pub sgd_schedule_lambda: f64,
    pub sgd_epochs: usize,
    pub forest: ForestParams,
    pub svm: SvmParams,
}

impl Default for Hyper {
    fn default() -> Self {
        Hyper {
            ridge_lambda: 1.0,
            lasso_lambda: 0.1,
            elastic_lambda: 0.1,
            elastic_mixing: 0.5,
            cd_tol: 1e-6,
            cd_max_sweeps: 10_000,
            huber_delta: 1.35,
            huber_tol: 1e-6,
            huber_max_iter: 500,
            poly_degree: 2,
            sgd_eta0: 0.01,
            sgd_schedule_lambda: 1e-4,
            sgd_epochs: 100,
            forest: ForestParams::default(),
            svm: SvmParams::default(),
        }
    }
}

impl RegressorSpec {
    pub fn new(kind: RegressorKind) -> RegressorSpec {
        RegressorSpec {
            kind,
            hyper: Hyper::default(),
            seed: 42,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let h = &self.hyper;
        if h.ridge_lambda < 0.0 || h.lasso_lambda < 0.0 || h.elastic_lambda < 0.0 {
            return Err(Error::Validation("penalty lambda must be >= 0".into()));
        }
        if !(0.0..=1.0).contains(&h.elastic_mixing) {
            return Err(Error::Validation("elastic mixing must be in [0, 1]".into()));
        }
        if h.poly_degree < 1 {
            return Err(Error::Validation("polynomial degree must be >= 1".into()));
        }
        if h.forest.n_trees < 1 {
            return Err(Error::Validation("forest must have >= 1 tree".into()));
        }
        if h.svm.c <= 0.0 {
            return Err(Error::Validation("SVM C must be > 0".into()));
        }
        if h.svm.epsilon < 0.0 {
            return Err(Error::Validation("SVM epsilon must be >= 0".into()));
        }
        Ok(())
    }

    fn standardizes(&self) -> bool {
        matches!(
            self.kind,
            RegressorKind::Ridge
                | RegressorKind::Lasso
                | RegressorKind::ElasticNet
                | RegressorKind::Polynomial
                | RegressorKind::Sgd
                | RegressorKind::Svm
        )
    }
}

/// Fitted state, by family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FittedState {
    Affine {
        coefficients: Vec<f64>,
        intercept: f64,
    },
    Polynomial {
        degree: usize,
        coefficients: Vec<f64>,
        intercept: f64,
    },
    Forest(Forest),
    Svm(SvmModel),
}

/// A fitted model: spec, input width, optional standardization
/// statistics, and the fitted state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub spec: RegressorSpec,
    pub n_features: usize,
    pub standardizer: Option<Standardizer>,
    pub state: FittedState,
}

/// Fit one model. Deterministic given `spec.seed`.
pub fn fit(spec: &RegressorSpec, x: &FeatureMatrix, y: &[f64]) -> Result<TrainedModel> {
    spec.validate()?;
    if x.rows != y.len() || x.rows == 0 {
        return Err(Error::Domain(format!(
            "feature rows {} and target rows {} must be equal and nonzero",
            x.rows,
            y.len()
        )));
    }
    if x.data.iter().any(|v| !v.is_finite()) || y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite training values".into()));
    }
    let (standardizer, xs);
    if spec.standardizes() {
        let stats = Standardizer::fit(x)?;
        xs = stats.transform(x)?;
        standardizer = Some(stats);
    } else {
        xs = x.clone();
        standardizer = None;
    }
    let h = &spec.hyper;
    let state = match spec.kind {
        RegressorKind::Linear => {
            let fit = linear::ols(&xs, y)?;
            FittedState::Affine {
                coefficients: fit.coefficients,
                intercept: fit.intercept,
            }
        }
        RegressorKind::Robust => {
            let fit = linear::huber_irls(&xs, y, h.huber_delta, h.huber_tol, h.huber_max_iter)?;
            FittedState::Affine {
                coefficients: fit.coefficients,
                intercept: fit.intercept,
            }
        }
        RegressorKind::Ridge => {
            check_rows(&xs)?;
            let fit = linear::ridge(&xs, y, h.ridge_lambda)?;
            FittedState::Affine {
                coefficients: fit.coefficients,
                intercept: fit.intercept,
            }
        }
        RegressorKind::Lasso => {
            let fit = coordinate::lasso(&xs, y, h.lasso_lambda, h.cd_tol, h.cd_max_sweeps)?;
            FittedState::Affine {
                coefficients: fit.coefficients,
                intercept: fit.intercept,
            }
        }
        RegressorKind::ElasticNet => {
            let fit = coordinate::elastic_net(
                &xs,
                y,
                h.elastic_lambda,
                h.elastic_mixing,
                h.cd_tol,
                h.cd_max_sweeps,
            )?;
            FittedState::Affine {
                coefficients: fit.coefficients,
                intercept: fit.intercept,
            }
        }
        RegressorKind::Polynomial => {
            let expanded = polynomial::expand(&xs, h.poly_degree)?;
            let fit = linear::ols(&expanded, y)?;
            FittedState::Polynomial {
                degree: h.poly_degree,
                coefficients: fit.coefficients,
                intercept: fit.intercept,
            }
        }
        RegressorKind::Sgd => {
            let fit = sgd::fit_sgd(
                &xs,
                y,
                h.sgd_eta0,
                h.sgd_schedule_lambda,
                h.sgd_epochs,
                spec.seed,
            )?;
            FittedState::Affine {
                coefficients: fit.coefficients,
                intercept: fit.intercept,
            }
        }
        RegressorKind::RandomForest => {
            FittedState::Forest(forest::fit_forest(&xs, y, &h.forest, spec.seed)?)
        }
        RegressorKind::Svm => FittedState::Svm(svm::fit_svr(&xs, y, &h.svm)?),
    };
    Ok(TrainedModel {
        spec: spec.clone(),
        n_features: x.cols,
        standardizer,
        state,
    })
}

fn check_rows(x: &FeatureMatrix) -> Result<()> {
    if x.rows < x.cols + 1 {
        return Err(Error::Domain(format!(
            "need at least {} rows for {} features, got {}",
            x.cols + 1,
            x.cols,
            x.rows
        )));
    }
    Ok(())
}

/// Predict on pre-expansion-width features; pure and deterministic.
pub fn predict(model: &TrainedModel, x: &FeatureMatrix) -> Result<Vec<f64>> {
    if x.cols != model.n_features {
        return Err(Error::Shape {
            expected: model.n_features,
            got: x.cols,
        });
    }
    let xs = match &model.standardizer {
        Some(stats) => stats.transform(x)?,
        None => x.clone(),
    };
    let preds = match &model.state {
        FittedState::Affine {
            coefficients,
            intercept,
        } => (0..xs.rows)
            .map(|r| {
                intercept
                    + xs.row(r)
                        .iter()
                        .zip(coefficients)
                        .map(|(v, c)| v * c)
                        .sum::<f64>()
            })
            .collect(),
        FittedState::Polynomial {
            degree,
            coefficients,
            intercept,
        } => {
            let expanded = polynomial::expand(&xs, *degree)?;
            (0..expanded.rows)
                .map(|r| {
                    intercept
                        + expanded
                            .row(r)
                            .iter()
                            .zip(coefficients)
                            .map(|(v, c)| v * c)
                            .sum::<f64>()
                })
                .collect()
        }
        FittedState::Forest(forest) => (0..xs.rows).map(|r| forest.predict_row(xs.row(r))).collect(),
        FittedState::Svm(svm) => (0..xs.rows).map(|r| svm.predict_row(xs.row(r))).collect(),
    };
    Ok(preds)
}

/// On-disk model envelope. Predictions are stable across save/load for
/// the same artifact version.
#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    artifact_version: String,
    model: TrainedModel,
}

const MODEL_FORMAT_VERSION: u32 = 1;

pub fn save_model(model: &TrainedModel, path: &Path) -> Result<()> {
    let file = ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        model: model.clone(),
    };
    let json = serde_json::to_string_pretty(&file)?;
    std::fs::write(path, json)?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<TrainedModel> {
    let text = std::fs::read_to_string(path)?;
    let file: ModelFile = serde_json::from_str(&text)?;
    if file.format_version != MODEL_FORMAT_VERSION {
        return Err(Error::Schema(format!(
            "model format version {} unsupported (expected {MODEL_FORMAT_VERSION})",
            file.format_version
        )));
    }
    Ok(file.model)
}

/// One benchmark row: the model kind with either its metrics or the
/// failure that prevented them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchmarkEntry {
    pub kind: RegressorKind,
    pub outcome: std::result::Result<MetricsReport, String>,
}

/// Fit and evaluate every spec on the train/test pair. Per-model seeds
/// derive from `master_seed`; output is sorted by ascending RMSE with
/// failures last. Single-model failures do not abort the run.
pub fn benchmark_all(
    train_x: &FeatureMatrix,
    train_y: &[f64],
    test_x: &FeatureMatrix,
    test_y: &[f64],
    specs: &[RegressorSpec],
    master_seed: u64,
) -> Vec<BenchmarkEntry> {
    let mut entries: Vec<BenchmarkEntry> = specs
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let mut seeded = spec.clone();
            seeded.seed = rng::derive_seed(master_seed, &[b'm' as u64, i as u64]);
            let outcome = fit(&seeded, train_x, train_y)
                .and_then(|model| predict(&model, test_x))
                .and_then(|preds| compute_metrics(test_y, &preds))
                .map_err(|e| e.to_string());
            BenchmarkEntry {
                kind: spec.kind,
                outcome,
            }
        })
        .collect();
    entries.sort_by(|a, b| match (&a.outcome, &b.outcome) {
        (Ok(ma), Ok(mb)) => ma.rmse.total_cmp(&mb.rmse),
        (Ok(_), Err(_)) => std::cmp::Ordering::Less,
        (Err(_), Ok(_)) => std::cmp::Ordering::Greater,
        (Err(_), Err(_)) => std::cmp::Ordering::Equal,
    });
    entries
}

/// Default specs for all nine kinds.
pub fn default_specs() -> Vec<RegressorSpec> {
    RegressorKind::ALL.iter().map(|&k| RegressorSpec::new(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;
    use rand::Rng;
    use tempfile::tempdir;

    fn synthetic(n: usize, p: usize, seed: u64) -> (FeatureMatrix, Vec<f64>) {
        let mut stream = derive_stream(seed, &[b's' as u64]);
        let mut rows = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            let row: Vec<f64> = (0..p).map(|_| stream.gen_range(-2.0..2.0)).collect();
            let target = 3.0 + row.iter().enumerate().map(|(j, v)| (j as f64 + 1.0) * v).sum::<f64>()
                + 0.05 * stream.gen_range(-1.0..1.0);
            rows.push(row);
            y.push(target);
        }
        (FeatureMatrix::from_rows(&rows), y)
    }

    #[test]
    fn every_kind_fits_and_predicts_finite_values() {
        let (x, y) = synthetic(120, 3, 7);
        for spec in default_specs() {
            let model = fit(&spec, &x, &y).unwrap_or_else(|e| panic!("{}: {e}", spec.kind));
            let preds = predict(&model, &x).unwrap();
            assert_eq!(preds.len(), x.rows);
            assert!(preds.iter().all(|v| v.is_finite()), "{}", spec.kind);
        }
    }

    #[test]
    fn standardization_policy_is_kind_dependent() {
        let (x, y) = synthetic(80, 2, 11);
        for spec in default_specs() {
            let model = fit(&spec, &x, &y).unwrap();
            assert_eq!(model.standardizer.is_some(), spec.standardizes(), "{}", spec.kind);
        }
    }

    #[test]
    fn saved_model_predicts_identically_after_reload() {
        let (x, y) = synthetic(100, 3, 3);
        let dir = tempdir().unwrap();
        for spec in default_specs() {
            let model = fit(&spec, &x, &y).unwrap();
            let path = dir.path().join(format!("{}.json", spec.kind.cli_name()));
            save_model(&model, &path).unwrap();
            let reloaded = load_model(&path).unwrap();
            assert_eq!(predict(&model, &x).unwrap(), predict(&reloaded, &x).unwrap());
        }
    }

    #[test]
    fn load_rejects_unknown_format_version() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.json");
        let (x, y) = synthetic(30, 1, 5);
        let model = fit(&RegressorSpec::new(RegressorKind::Linear), &x, &y).unwrap();
        save_model(&model, &path).unwrap();
        let text = std::fs::read_to_string(&path)
            .unwrap()
            .replace("\"format_version\": 1", "\"format_version\": 99");
        std::fs::write(&path, text).unwrap();
        assert!(matches!(load_model(&path), Err(Error::Schema(_))));
    }

    #[test]
    fn predict_rejects_wrong_width() {
        let (x, y) = synthetic(40, 2, 9);
        let model = fit(&RegressorSpec::new(RegressorKind::Linear), &x, &y).unwrap();
        let (wide, _) = synthetic(5, 3, 9);
        assert!(matches!(
            predict(&model, &wide),
            Err(Error::Shape { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in RegressorKind::ALL {
            assert_eq!(kind.cli_name().parse::<RegressorKind>().unwrap(), kind);
        }
        assert!(matches!("catboost".parse::<RegressorKind>(), Err(Error::Usage(_))));
    }

    #[test]
    fn benchmark_orders_by_ascending_rmse_and_is_seed_deterministic() {
        let (train_x, train_y) = synthetic(160, 3, 21);
        let (test_x, test_y) = synthetic(40, 3, 22);
        let run = || benchmark_all(&train_x, &train_y, &test_x, &test_y, &default_specs(), 77);
        let a = run();
        let b = run();
        assert_eq!(a.len(), 9);
        for (ea, eb) in a.iter().zip(&b) {
            assert_eq!(ea.kind, eb.kind);
            match (&ea.outcome, &eb.outcome) {
                (Ok(ma), Ok(mb)) => assert_eq!(ma.rmse, mb.rmse),
                (Err(sa), Err(sb)) => assert_eq!(sa, sb),
                _ => panic!("outcome mismatch for {}", ea.kind),
            }
        }
        let rmses: Vec<f64> = a
            .iter()
            .filter_map(|e| e.outcome.as_ref().ok().map(|m| m.rmse))
            .collect();
        assert!(rmses.windows(2).all(|w| w[0] <= w[1]), "{rmses:?}");
    }
}
