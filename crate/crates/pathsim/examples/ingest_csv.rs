//! Load an external CSV, validate it against the twelve-column schema,
//! drop the optional bookkeeping columns, and show the feature matrix a
//! model would train on.
//!
//! Run with: cargo run --example ingest_csv -- path/to/data.csv

use pathsim::dataset::read_csv;

fn main() -> pathsim::Result<()> {
    let path = match std::env::args().nth(1) {
        Some(p) => std::path::PathBuf::from(p),
        None => {
            eprintln!("usage: ingest_csv <data.csv>");
            std::process::exit(2);
        }
    };

    let raw = read_csv(&path, true)?;
    println!("{}: {} rows x {} columns", path.display(), raw.n_rows(), raw.n_cols());

    let dataset = raw.drop_ignored_columns();
    dataset.check_schema()?;
    println!("schema OK after dropping bookkeeping columns");

    let (features, target, names) = dataset.to_features()?;
    println!(
        "feature matrix {} x {}, target column \"Path Loss (dB)\"",
        features.rows, features.cols
    );
    for (j, name) in names.iter().enumerate() {
        let mean = (0..features.rows).map(|r| features.get(r, j)).sum::<f64>()
            / features.rows as f64;
        println!("  [{j}] {name:<32} mean {mean:.3}");
    }
    let target_mean = target.iter().sum::<f64>() / target.len() as f64;
    println!("target mean {target_mean:.3} dB");
    Ok(())
}
