//! Command-line surface: `simulate`, `train`, `report`, and `pathloss`.
//!
//! Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.
//! Every command honors `--seed` with byte-identical outputs apart from
//! manifest timestamps, and every artifact-producing command writes a
//! run manifest next to its primary output.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::atmosphere::{
    specific_attenuation, AttenuationCoefficients, AtmosphericState, Season,
};
use crate::channel::{ci_path_loss, fspl, sweep_scenario, ChannelModelParams};
use crate::config::Config;
use crate::dataset::{read_csv, write_csv, Cell, TabularDataset};
use crate::error::{Error, Result};
use crate::manifest::RunManifest;
use crate::regression::{
    benchmark_all, default_specs, save_model, BenchmarkEntry, RegressorKind, RegressorSpec,
};
use crate::{regression, report};

/// Environment variable naming a directory holding `config.toml`, used
/// when `--config` is not given.
pub const CONFIG_DIR_ENV: &str = "PATHSIM_CONFIG_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "pathsim",
    version,
    about = "Seasonal mm-wave path-loss simulation, model benchmarking, and reporting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a channel dataset over the scenario grid.
    Simulate(SimulateArgs),
    /// Fit regression models on a dataset and write metrics.
    Train(TrainArgs),
    /// Render path-loss and model-comparison charts.
    Report(ReportArgs),
    /// Evaluate the deterministic path-loss model at one point.
    Pathloss(PathlossArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Seasons to simulate (comma-separated); default: all configured.
    #[arg(long, value_delimiter = ',')]
    pub seasons: Vec<String>,
    /// Carrier frequencies in GHz (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub freqs: Vec<f64>,
    /// Minimum T-R separation, meters.
    #[arg(long)]
    pub dist_min: Option<f64>,
    /// Maximum T-R separation, meters.
    #[arg(long)]
    pub dist_max: Option<f64>,
    /// Number of distance grid points.
    #[arg(long)]
    pub dist_steps: Option<usize>,
    /// Drops (independent weather/fading draws) per grid point.
    #[arg(long)]
    pub drops: Option<usize>,
    /// Master seed; all randomness derives from it.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output CSV path.
    #[arg(long, default_value = "dataset.csv")]
    pub out: PathBuf,
    /// TOML config file; defaults to the bundled configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Input dataset CSV in the twelve-column schema.
    #[arg(long)]
    pub data: PathBuf,
    /// "all" or a comma-separated subset of model kinds.
    #[arg(long, default_value = "all", value_delimiter = ',')]
    pub models: Vec<String>,
    /// Training fraction of the row split.
    #[arg(long, default_value_t = 0.8)]
    pub split: f64,
    /// Master seed for the split and the stochastic models.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output directory for metrics and model artifacts.
    #[arg(long, default_value = "models")]
    pub out: PathBuf,
    /// Metrics table format on stdout.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Input dataset CSV in the twelve-column schema.
    #[arg(long)]
    pub data: PathBuf,
    /// Training fraction used when benchmarking models for the charts.
    #[arg(long, default_value_t = 0.8)]
    pub split: f64,
    /// Master seed for the split and the stochastic models.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output directory for the chart files.
    #[arg(long, default_value = "report")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PathlossArgs {
    /// Carrier frequency, GHz.
    #[arg(long)]
    pub freq: f64,
    /// T-R separation, meters.
    #[arg(long)]
    pub dist: f64,
    /// Path-loss exponent.
    #[arg(long, default_value_t = 3.2)]
    pub n: f64,
    /// Atmospheric attenuation factor, dB/m. Mutually exclusive with
    /// the weather flags.
    #[arg(long, conflicts_with_all = ["temp", "humidity", "pressure", "rain"])]
    pub alpha: Option<f64>,
    /// Temperature, Celsius (weather route).
    #[arg(long, requires_all = ["humidity", "pressure", "rain"])]
    pub temp: Option<f64>,
    /// Relative humidity, percent (weather route).
    #[arg(long)]
    pub humidity: Option<f64>,
    /// Pressure, mbar (weather route).
    #[arg(long)]
    pub pressure: Option<f64>,
    /// Rain rate, mm/hr (weather route).
    #[arg(long)]
    pub rain: Option<f64>,
    /// Fixed shadow-fading term, dB.
    #[arg(long, default_value_t = 0.0)]
    pub shadow: f64,
    /// TOML config file for attenuation coefficients.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output format for the term breakdown.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

/// Run a parsed command, returning the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Train(args) => cmd_train(&args),
        Command::Report(args) => cmd_report(&args),
        Command::Pathloss(args) => cmd_pathloss(&args),
    };
    match result {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Usage(_) => 2,
                _ => 1,
            }
        }
    }
}

fn resolve_config(explicit: Option<&Path>) -> Result<Config> {
    if let Some(path) = explicit {
        return Config::load(Some(path));
    }
    if let Ok(dir) = std::env::var(CONFIG_DIR_ENV) {
        let candidate = Path::new(&dir).join("config.toml");
        if candidate.exists() {
            return Config::load(Some(&candidate));
        }
    }
    Config::load(None)
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let mut cfg = resolve_config(args.config.as_deref())?;
    if !args.freqs.is_empty() {
        cfg.scenario.frequencies_ghz = args.freqs.clone();
    }
    if let Some(v) = args.dist_min {
        cfg.scenario.distance_min_m = v;
    }
    if let Some(v) = args.dist_max {
        cfg.scenario.distance_max_m = v;
    }
    if let Some(v) = args.dist_steps {
        cfg.scenario.distance_steps = v;
    }
    if let Some(v) = args.drops {
        cfg.scenario.drops_per_point = v;
    }
    cfg.validate()?;
    // Restrict seasons only after the full config has validated, so a
    // partial sweep does not trip the all-seasons completeness check.
    if !args.seasons.is_empty() {
        let keep: BTreeSet<String> = args
            .seasons
            .iter()
            .map(|s| {
                Season::from_name(s)
                    .map(|season| season.name().to_lowercase())
                    .map_err(|e| Error::Usage(e.to_string()))
            })
            .collect::<Result<_>>()?;
        cfg.seasons.retain(|name, _| keep.contains(name));
    }

    let records = sweep_scenario(&cfg, args.seed)?;
    let dataset = TabularDataset::from_records(&records);
    dataset.check_schema()?;
    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    write_csv(&dataset, &args.out)?;

    let mut manifest = RunManifest::new("simulate", args.seed, cfg);
    manifest.outputs.push(args.out.clone());
    manifest.write(&RunManifest::sibling_path(&args.out))?;
    println!(
        "wrote {} rows to {}",
        dataset.n_rows(),
        args.out.display()
    );
    Ok(())
}

fn parse_model_list(models: &[String]) -> Result<Vec<RegressorSpec>> {
    if models.len() == 1 && models[0].eq_ignore_ascii_case("all") {
        return Ok(default_specs());
    }
    models
        .iter()
        .map(|name| Ok(RegressorSpec::new(name.parse::<RegressorKind>()?)))
        .collect()
}

/// Load a dataset, drop the ignored columns, and split it into
/// train/test feature matrices.
#[allow(clippy::type_complexity)]
fn prepare_split(
    data: &Path,
    split: f64,
    seed: u64,
) -> Result<(
    crate::dataset::FeatureMatrix,
    Vec<f64>,
    crate::dataset::FeatureMatrix,
    Vec<f64>,
)> {
    if !(0.0 < split && split < 1.0) {
        return Err(Error::Usage(format!(
            "--split must be in (0, 1), got {split}"
        )));
    }
    let raw = read_csv(data, true)?;
    let dataset = raw.drop_ignored_columns();
    dataset.check_schema()?;
    let (train, test) = dataset.split(split, seed)?;
    let (train_x, train_y, _) = train.to_features()?;
    let (test_x, test_y, _) = test.to_features()?;
    Ok((train_x, train_y, test_x, test_y))
}

fn metrics_table(entries: &[BenchmarkEntry]) -> TabularDataset {
    let mut table = TabularDataset::new(
        ["Model", "MAE", "MSE", "RMSE", "R2"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    )
    .expect("static header");
    for entry in entries {
        if let Ok(m) = &entry.outcome {
            table
                .push_row(vec![
                    Cell::Text(entry.kind.label().to_string()),
                    Cell::Num(m.mae),
                    Cell::Num(m.mse),
                    Cell::Num(m.rmse),
                    Cell::Num(m.r2),
                ])
                .expect("row width");
        }
    }
    table
}

fn print_metrics(entries: &[BenchmarkEntry], format: OutputFormat) {
    match format {
        OutputFormat::Text => {
            println!(
                "{:<24} {:>10} {:>12} {:>10} {:>8}",
                "Model", "MAE", "MSE", "RMSE", "R2"
            );
            for entry in entries {
                match &entry.outcome {
                    Ok(m) => println!(
                        "{:<24} {:>10.4} {:>12.4} {:>10.4} {:>8.4}",
                        entry.kind.label(),
                        m.mae,
                        m.mse,
                        m.rmse,
                        m.r2
                    ),
                    Err(msg) => {
                        println!("{:<24} failed: {msg}", entry.kind.label())
                    }
                }
            }
        }
        OutputFormat::Csv => {
            println!("Model,MAE,MSE,RMSE,R2");
            for entry in entries {
                if let Ok(m) = &entry.outcome {
                    println!(
                        "{},{},{},{},{}",
                        entry.kind.label(),
                        m.mae,
                        m.mse,
                        m.rmse,
                        m.r2
                    );
                }
            }
        }
    }
}

pub fn cmd_train(args: &TrainArgs) -> Result<()> {
    let specs = parse_model_list(&args.models)?;
    let (train_x, train_y, test_x, test_y) =
        prepare_split(&args.data, args.split, args.seed)?;

    std::fs::create_dir_all(&args.out)?;
    let entries = benchmark_all(&train_x, &train_y, &test_x, &test_y, &specs, args.seed);

    // Persist a model artifact per successful fit.
    let mut outputs = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let mut seeded = spec.clone();
        seeded.seed = crate::rng::derive_seed(args.seed, &[b'm' as u64, i as u64]);
        if let Ok(model) = regression::fit(&seeded, &train_x, &train_y) {
            let path = args
                .out
                .join(format!("{}.model.json", spec.kind.cli_name()));
            save_model(&model, &path)?;
            outputs.push(path);
        }
    }

    let metrics_path = args.out.join("metrics.csv");
    write_csv(&metrics_table(&entries), &metrics_path)?;
    outputs.push(metrics_path);

    let mut manifest = RunManifest::new("train", args.seed, Config::default_config());
    manifest.inputs.push(args.data.clone());
    manifest.outputs = outputs;
    manifest.write(&RunManifest::sibling_path(&args.out.join("metrics.csv")))?;

    print_metrics(&entries, args.format);
    if entries.iter().all(|e| e.outcome.is_err()) {
        return Err(Error::Domain("every model failed to fit".into()));
    }
    Ok(())
}

pub fn cmd_report(args: &ReportArgs) -> Result<()> {
    let raw = read_csv(&args.data, true)?;
    let dataset = raw.drop_ignored_columns();
    dataset.check_schema()?;
    let records = records_from_dataset(&dataset)?;

    let (train_x, train_y, test_x, test_y) =
        prepare_split(&args.data, args.split, args.seed)?;
    let entries = benchmark_all(
        &train_x,
        &train_y,
        &test_x,
        &test_y,
        &default_specs(),
        args.seed,
    );

    std::fs::create_dir_all(&args.out)?;
    let mut outputs = Vec::new();
    let present: BTreeSet<Season> = records.iter().map(|r| r.season).collect();
    for season in Season::ALL {
        if present.contains(&season) {
            let (svg, csv) = report::season_chart(&records, season, &args.out)?;
            outputs.push(svg);
            outputs.push(csv);
        }
    }
    let (svg, csv) = report::r2_chart(&entries, &args.out)?;
    outputs.push(svg);
    outputs.push(csv);
    let (svg, csv) = report::rmse_comparison_chart(&entries, &args.out)?;
    outputs.push(svg);
    outputs.push(csv);

    let mut manifest = RunManifest::new("report", args.seed, Config::default_config());
    manifest.inputs.push(args.data.clone());
    manifest.outputs = outputs.clone();
    manifest.write(&args.out.join("report.manifest.json"))?;

    for path in &outputs {
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Rebuild channel records from a schema-checked dataset, for charting.
fn records_from_dataset(dataset: &TabularDataset) -> Result<Vec<crate::channel::ChannelRecord>> {
    let idx = |name: &str| {
        dataset
            .column_index(name)
            .ok_or_else(|| Error::Schema(format!("missing column {name:?}")))
    };
    let col_dist = idx("T-R Separation Distance (m)")?;
    let col_delay = idx("Time Delay (ns)")?;
    let col_power = idx("Received Power (dBm)")?;
    let col_phase = idx("Phase (rad)")?;
    let col_aod_az = idx("Azimuth AoD (degree)")?;
    let col_aod_el = idx("Elevation AoD (degree)")?;
    let col_aoa_az = idx("Azimuth AoA (degree)")?;
    let col_aoa_el = idx("Elevation AoA (degree)")?;
    let col_rms = idx("RMS Delay Spread (ns)")?;
    let col_season = idx("Season")?;
    let col_freq = idx("Frequency")?;
    let col_pl = idx("Path Loss (dB)")?;
    let num = |cell: &Cell, row: usize, name: &str| {
        cell.as_f64().ok_or_else(|| Error::Parse {
            row,
            message: format!("non-numeric value in column {name:?}"),
        })
    };
    dataset
        .rows()
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let season = match &row[col_season] {
                Cell::Text(name) => Season::from_name(name)?,
                Cell::Num(v) => crate::dataset::decode_season(*v as u8)?,
            };
            Ok(crate::channel::ChannelRecord {
                t_r_separation_m: num(&row[col_dist], r, "T-R Separation Distance (m)")?,
                time_delay_ns: num(&row[col_delay], r, "Time Delay (ns)")?,
                received_power_dbm: num(&row[col_power], r, "Received Power (dBm)")?,
                phase_rad: num(&row[col_phase], r, "Phase (rad)")?,
                azimuth_aod_deg: num(&row[col_aod_az], r, "Azimuth AoD (degree)")?,
                elevation_aod_deg: num(&row[col_aod_el], r, "Elevation AoD (degree)")?,
                azimuth_aoa_deg: num(&row[col_aoa_az], r, "Azimuth AoA (degree)")?,
                elevation_aoa_deg: num(&row[col_aoa_el], r, "Elevation AoA (degree)")?,
                rms_delay_spread_ns: num(&row[col_rms], r, "RMS Delay Spread (ns)")?,
                season,
                frequency_ghz: num(&row[col_freq], r, "Frequency (GHz)")?,
                path_loss_db: num(&row[col_pl], r, "Path Loss (dB)")?,
            })
        })
        .collect()
}

/// The printable term breakdown of one path-loss evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossBreakdown {
    pub fspl_db: f64,
    pub distance_term_db: f64,
    pub attenuation_term_db: f64,
    pub shadow_db: f64,
    pub total_db: f64,
}

pub fn evaluate_pathloss(args: &PathlossArgs) -> Result<PathLossBreakdown> {
    let alpha = match (args.alpha, args.temp) {
        (Some(alpha), _) => alpha,
        (None, Some(temp)) => {
            let state = AtmosphericState {
                temperature: temp,
                humidity: args.humidity.expect("clap requires_all"),
                pressure: args.pressure.expect("clap requires_all"),
                rain_rate: args.rain.expect("clap requires_all"),
            };
            state.validate()?;
            let cfg = resolve_config(args.config.as_deref())?;
            let coeffs = AttenuationCoefficients::from_config(&cfg);
            specific_attenuation(args.freq, &state, &coeffs, false)?.total_alpha
        }
        (None, None) => 0.0,
    };
    let params = ChannelModelParams {
        path_loss_exponent: args.n,
        shadow_sigma: 0.0,
        ..ChannelModelParams::default()
    };
    let total = ci_path_loss(args.freq, args.dist, &params, alpha, args.shadow)?;
    let fspl_db = fspl(args.freq)?;
    Ok(PathLossBreakdown {
        fspl_db,
        distance_term_db: 10.0 * args.n * args.dist.log10(),
        attenuation_term_db: alpha * args.dist,
        shadow_db: args.shadow,
        total_db: total,
    })
}

pub fn cmd_pathloss(args: &PathlossArgs) -> Result<()> {
    let b = evaluate_pathloss(args)?;
    match args.format {
        OutputFormat::Text => {
            println!("FSPL (1 m reference)    {:>12.4} dB", b.fspl_db);
            println!("Distance term           {:>12.4} dB", b.distance_term_db);
            println!("Atmospheric attenuation {:>12.4} dB", b.attenuation_term_db);
            println!("Shadow fading           {:>12.4} dB", b.shadow_db);
            println!("Total path loss         {:>12.4} dB", b.total_db);
        }
        OutputFormat::Csv => {
            println!("fspl_db,distance_term_db,attenuation_term_db,shadow_db,total_db");
            println!(
                "{},{},{},{},{}",
                b.fspl_db, b.distance_term_db, b.attenuation_term_db, b.shadow_db, b.total_db
            );
        }
    }
    Ok(())
}
