//! Generate the default simulated dataset and write it as a CSV in the
//! twelve-column schema, with a run manifest alongside.
//!
//! Run with: cargo run --example simulate_dataset -- [out.csv]

use std::path::PathBuf;

use pathsim::channel::sweep_scenario;
use pathsim::config::Config;
use pathsim::dataset::{write_csv, TabularDataset};
use pathsim::manifest::RunManifest;

fn main() -> pathsim::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "dataset.csv".to_string())
        .into();
    let seed = 42;
    let cfg = Config::default_config();

    let records = sweep_scenario(&cfg, seed)?;
    let dataset = TabularDataset::from_records(&records);
    dataset.check_schema()?;
    write_csv(&dataset, &out)?;

    let mut manifest = RunManifest::new("simulate", seed, cfg);
    manifest.outputs.push(out.clone());
    manifest.write(&RunManifest::sibling_path(&out))?;

    println!(
        "{} rows x {} columns -> {}",
        dataset.n_rows(),
        dataset.n_cols(),
        out.display()
    );
    Ok(())
}
