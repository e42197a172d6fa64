//! Simulate a dataset in memory, split it 80/20, benchmark all nine
//! regression models on path-loss prediction, and print the metrics
//! sorted by RMSE.
//!
//! Run with: cargo run --release --example train_models

use pathsim::channel::sweep_scenario;
use pathsim::config::Config;
use pathsim::dataset::TabularDataset;
use pathsim::regression::{benchmark_all, default_specs};

fn main() -> pathsim::Result<()> {
    let seed = 42;
    let cfg = Config::default_config();
    let records = sweep_scenario(&cfg, seed)?;
    let dataset = TabularDataset::from_records(&records);

    let (train, test) = dataset.split(0.8, seed)?;
    let (train_x, train_y, feature_names) = train.to_features()?;
    let (test_x, test_y, _) = test.to_features()?;
    println!(
        "train {} rows, test {} rows, {} features: {}",
        train_x.rows,
        test_x.rows,
        feature_names.len(),
        feature_names.join(", ")
    );

    let entries = benchmark_all(&train_x, &train_y, &test_x, &test_y, &default_specs(), seed);
    println!(
        "\n{:<24} {:>10} {:>12} {:>10} {:>8}",
        "Model", "MAE", "MSE", "RMSE", "R2"
    );
    for entry in &entries {
        match &entry.outcome {
            Ok(m) => println!(
                "{:<24} {:>10.4} {:>12.4} {:>10.4} {:>8.4}",
                entry.kind.label(),
                m.mae,
                m.mse,
                m.rmse,
                m.r2
            ),
            Err(msg) => println!("{:<24} failed: {msg}", entry.kind.label()),
        }
    }
    Ok(())
}
