//! Produce the full chart set — four per-season path-loss charts, the
//! R-squared bar chart, and the RMSE comparison against published
//! figures — into a directory of SVG files with CSV sidecars.
//!
//! Run with: cargo run --release --example render_report -- [out_dir]

use std::path::PathBuf;

use pathsim::channel::sweep_scenario;
use pathsim::config::Config;
use pathsim::dataset::TabularDataset;
use pathsim::regression::{benchmark_all, default_specs};
use pathsim::report::full_report;

fn main() -> pathsim::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "report_out".to_string())
        .into();
    let seed = 42;
    let cfg = Config::default_config();
    let records = sweep_scenario(&cfg, seed)?;

    let dataset = TabularDataset::from_records(&records);
    let (train, test) = dataset.split(0.8, seed)?;
    let (train_x, train_y, _) = train.to_features()?;
    let (test_x, test_y, _) = test.to_features()?;
    let entries = benchmark_all(&train_x, &train_y, &test_x, &test_y, &default_specs(), seed);

    for path in full_report(&records, &entries, &out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
