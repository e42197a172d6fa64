//! Black-box tests of the `pathsim` binary: flags, outputs, and the
//! exit-code contract (0 success, 1 runtime, 2 usage).

use std::path::Path;
use std::process::{Command, Output};

fn pathsim(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathsim"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn pathsim")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn pathloss_reference_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = pathsim(
        dir.path(),
        &["pathloss", "--freq", "1", "--dist", "1", "--alpha", "0"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("32.4000"), "{}", stdout(&out));
}

#[test]
fn pathloss_oracle_case_in_csv_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = pathsim(
        dir.path(),
        &[
            "pathloss", "--freq", "7.125", "--dist", "100", "--n", "3.2", "--alpha",
            "0", "--format", "csv",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let body = stdout(&out);
    let total: f64 = body
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .last()
        .unwrap()
        .parse()
        .unwrap();
    assert!((total - 113.456).abs() < 1e-3, "{total}");
}

#[test]
fn pathloss_domain_error_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = pathsim(
        dir.path(),
        &["pathloss", "--freq", "7.125", "--dist", "0.5", "--alpha", "0"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("reference distance"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    // Unknown subcommand and missing required flags are caught by the
    // argument parser.
    assert_eq!(pathsim(dir.path(), &["bogus"]).status.code(), Some(2));
    assert_eq!(pathsim(dir.path(), &["pathloss"]).status.code(), Some(2));
    // Conflicting routes: --alpha with weather flags.
    let out = pathsim(
        dir.path(),
        &[
            "pathloss", "--freq", "1", "--dist", "1", "--alpha", "0", "--temp", "20",
            "--humidity", "50", "--pressure", "1008", "--rain", "1",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_model_name_is_usage_error_listing_kinds() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("d.csv"), "x\n1\n").unwrap();
    let out = pathsim(
        dir.path(),
        &["train", "--data", "d.csv", "--models", "catboost"],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    for kind in ["linear", "ridge", "lasso", "elasticnet", "rf", "svm"] {
        assert!(err.contains(kind), "missing {kind} in: {err}");
    }
}

#[test]
fn train_on_missing_file_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = pathsim(dir.path(), &["train", "--data", "no_such.csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn report_on_missing_file_exits_1_naming_it() {
    let dir = tempfile::tempdir().unwrap();
    let out = pathsim(dir.path(), &["report", "--data", "no_such.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no_such.csv"), "{}", stderr(&out));
}

#[test]
fn simulate_default_frequencies_match_the_four_carriers() {
    let dir = tempfile::tempdir().unwrap();
    let out = pathsim(dir.path(), &["simulate", "--out", "d.csv", "--dist-steps", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();
    let header: Vec<&str> = body.lines().next().unwrap().split(',').collect();
    let freq_col = header.iter().position(|h| *h == "Frequency").unwrap();
    let mut freqs: Vec<String> = body
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(freq_col).unwrap().to_string())
        .collect();
    freqs.sort();
    freqs.dedup();
    assert_eq!(freqs, ["24.25", "52.6", "7.125", "71"]);
}

#[test]
fn simulate_minimal_grid_single_path_yields_one_row() {
    let dir = tempfile::tempdir().unwrap();
    // Start from the bundled config and force a single propagation path.
    let base = include_str!("../assets/default_config.toml");
    let config = base
        .replace("n_paths_min = 2", "n_paths_min = 1")
        .replace("n_paths_max = 6", "n_paths_max = 1");
    std::fs::write(dir.path().join("one.toml"), config).unwrap();
    let out = pathsim(
        dir.path(),
        &[
            "simulate", "--config", "one.toml", "--seasons", "Winter", "--freqs",
            "7.125", "--dist-min", "100", "--dist-max", "100", "--dist-steps", "1",
            "--drops", "1", "--out", "one.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let body = std::fs::read_to_string(dir.path().join("one.csv")).unwrap();
    assert_eq!(body.lines().count(), 2, "expected header + 1 row:\n{body}");
}

#[test]
fn simulate_writes_manifest_with_seed() {
    let dir = tempfile::tempdir().unwrap();
    pathsim(
        dir.path(),
        &["simulate", "--seed", "99", "--dist-steps", "2", "--out", "d.csv"],
    );
    let manifest = std::fs::read_to_string(dir.path().join("d.manifest.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    assert_eq!(value["master_seed"], 99);
    assert_eq!(value["command"], "simulate");
}

#[test]
fn simulate_unknown_season_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = pathsim(
        dir.path(),
        &["simulate", "--seasons", "Monsoon", "--out", "d.csv"],
    );
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

/// Twelve-column CSV whose path loss is an exact affine function of
/// the numeric features: every linear-family model can realize it.
fn write_noiseless_line_dataset(path: &Path, rows: usize) {
    let seasons = ["Winter", "Spring", "Summer", "Fall"];
    let mut body = String::from(
        "T-R Separation Distance (m),Time Delay (ns),Received Power (dBm),Phase (rad),\
         Azimuth AoD (degree),Elevation AoD (degree),Azimuth AoA (degree),\
         Elevation AoA (degree),RMS Delay Spread (ns),Season,Frequency,Path Loss (dB)\n",
    );
    for i in 0..rows {
        let d = 10.0 + i as f64;
        let delay = (i % 7) as f64;
        let power = -60.0 - 0.05 * ((i * 37) % 19) as f64;
        let phase = 0.1 * (i % 11) as f64;
        let aod_az = (i % 13) as f64 * 25.0;
        let aod_el = (i % 5) as f64 * 10.0 - 20.0;
        let aoa_az = (i % 17) as f64 * 20.0;
        let aoa_el = (i % 3) as f64 * 15.0 - 15.0;
        let spread = 5.0 + (i % 9) as f64;
        let freq = [7.125, 24.25, 52.6, 71.0][i % 4];
        let pl = 70.0 + 0.2 * d + 0.5 * delay - 0.3 * power + 0.01 * phase
            + 0.002 * aod_az - 0.004 * aod_el + 0.003 * aoa_az + 0.006 * aoa_el
            - 0.05 * spread + 0.1 * freq;
        body.push_str(&format!(
            "{d},{delay},{power},{phase},{aod_az},{aod_el},{aoa_az},{aoa_el},{spread},{},{freq},{pl}\n",
            seasons[i % 4]
        ));
    }
    std::fs::write(path, body).unwrap();
}

#[test]
fn train_linear_on_noiseless_line_reaches_unit_r2() {
    let dir = tempfile::tempdir().unwrap();
    write_noiseless_line_dataset(&dir.path().join("line.csv"), 200);
    let out = pathsim(
        dir.path(),
        &[
            "train", "--data", "line.csv", "--models", "linear", "--format", "csv",
            "--out", "m",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let body = stdout(&out);
    let row = body
        .lines()
        .find(|l| l.starts_with("Linear Regression"))
        .unwrap();
    let r2: f64 = row.split(',').last().unwrap().parse().unwrap();
    assert!(r2 >= 0.999, "R2 {r2}\n{body}");
}

#[test]
fn train_metrics_file_satisfies_rmse_identity() {
    let dir = tempfile::tempdir().unwrap();
    write_noiseless_line_dataset(&dir.path().join("line.csv"), 200);
    let out = pathsim(
        dir.path(),
        &[
            "train", "--data", "line.csv", "--models", "linear,ridge,lasso", "--out",
            "m",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let body = std::fs::read_to_string(dir.path().join("m/metrics.csv")).unwrap();
    let mut checked = 0;
    for line in body.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let mse: f64 = cells[2].parse().unwrap();
        let rmse: f64 = cells[3].parse().unwrap();
        assert!((rmse * rmse - mse).abs() <= 1e-9 * mse.max(1.0), "{line}");
        checked += 1;
    }
    assert_eq!(checked, 3);
}

#[test]
fn train_invalid_split_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    write_noiseless_line_dataset(&dir.path().join("line.csv"), 40);
    let out = pathsim(
        dir.path(),
        &["train", "--data", "line.csv", "--split", "1.5"],
    );
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn report_on_single_season_emits_one_line_chart() {
    let dir = tempfile::tempdir().unwrap();
    let out = pathsim(
        dir.path(),
        &["simulate", "--seasons", "Winter", "--out", "w.csv"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = pathsim(
        dir.path(),
        &["report", "--data", "w.csv", "--out", "figs"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let charts: Vec<String> = std::fs::read_dir(dir.path().join("figs"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.starts_with("pathloss_") && n.ends_with(".svg"))
        .collect();
    assert_eq!(charts, ["pathloss_winter.svg"]);
    let text =
        std::fs::read_to_string(dir.path().join("figs/pathloss_winter.svg")).unwrap();
    assert!(text.contains("Winter"), "chart not titled for winter");
}
