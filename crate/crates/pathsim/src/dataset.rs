//! Tabular dataset handling: the twelve-column CSV schema, ingestion,
//! preprocessing, and train/test splitting.

use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::atmosphere::Season;
use crate::channel::ChannelRecord;
use crate::error::{Error, Result};
use crate::rng;

/// Canonical column names, in schema order.
pub const SCHEMA_COLUMNS: [&str; 12] = [
    "T-R Separation Distance (m)",
    "Time Delay (ns)",
    "Received Power (dBm)",
    "Phase (rad)",
    "Azimuth AoD (degree)",
    "Elevation AoD (degree)",
    "Azimuth AoA (degree)",
    "Elevation AoA (degree)",
    "RMS Delay Spread (ns)",
    "Season",
    "Frequency",
    "Path Loss (dB)",
];

/// Columns dropped before training; they carry no signal.
pub const IGNORED_COLUMNS: [&str; 2] = ["Data Source", "Simulation Number"];

pub const TARGET_COLUMN: &str = "Path Loss (dB)";

/// One cell: a number or a label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Text(_) => None,
        }
    }
    fn render(&self) -> String {
        match self {
            // `{}` on f64 is the shortest decimal that round-trips.
            Cell::Num(v) => format!("{v}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// A rectangular table with named columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabularDataset {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl TabularDataset {
    pub fn new(columns: Vec<String>) -> Result<TabularDataset> {
        let mut seen = std::collections::HashSet::new();
        for c in &columns {
            if !seen.insert(c.clone()) {
                return Err(Error::Schema(format!("duplicate column {c:?}")));
            }
        }
        Ok(TabularDataset {
            columns,
            rows: Vec::new(),
        })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }
    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }
    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn push_row(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Schema(format!(
                "row has {} cells, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Build the canonical table from simulated records.
    pub fn from_records(records: &[ChannelRecord]) -> TabularDataset {
        let mut data = TabularDataset::new(
            SCHEMA_COLUMNS.iter().map(|s| s.to_string()).collect(),
        )
        .expect("canonical columns are unique");
        for r in records {
            data.rows.push(vec![
                Cell::Num(r.t_r_separation_m),
                Cell::Num(r.time_delay_ns),
                Cell::Num(r.received_power_dbm),
                Cell::Num(r.phase_rad),
                Cell::Num(r.azimuth_aod_deg),
                Cell::Num(r.elevation_aod_deg),
                Cell::Num(r.azimuth_aoa_deg),
                Cell::Num(r.elevation_aoa_deg),
                Cell::Num(r.rms_delay_spread_ns),
                Cell::Text(r.season.name().to_string()),
                Cell::Num(r.frequency_ghz),
                Cell::Num(r.path_loss_db),
            ]);
        }
        data
    }

    /// Strict schema check: after setting aside the optional ignored
    /// columns, names and order must match the canonical schema exactly.
    pub fn check_schema(&self) -> Result<()> {
        let effective: Vec<&String> = self
            .columns
            .iter()
            .filter(|c| !IGNORED_COLUMNS.contains(&c.as_str()))
            .collect();
        let expected: Vec<&str> = SCHEMA_COLUMNS.to_vec();
        if effective.len() != expected.len()
            || effective
                .iter()
                .zip(&expected)
                .any(|(got, want)| got.as_str() != *want)
        {
            let missing: Vec<&str> = expected
                .iter()
                .filter(|w| !effective.iter().any(|g| g.as_str() == **w))
                .copied()
                .collect();
            let extra: Vec<String> = effective
                .iter()
                .filter(|g| !expected.contains(&g.as_str()))
                .map(|g| g.to_string())
                .collect();
            return Err(Error::Schema(format!(
                "header does not match the dataset schema; missing: {missing:?}, unexpected: {extra:?}"
            )));
        }
        // Validate categorical and frequency domains row by row.
        let season_idx = self.column_index("Season").expect("checked above");
        let freq_idx = self.column_index("Frequency").expect("checked above");
        for (i, row) in self.rows.iter().enumerate() {
            match &row[season_idx] {
                Cell::Text(s) => {
                    Season::from_name(s).map_err(|e| Error::Parse {
                        row: i + 1,
                        message: e.to_string(),
                    })?;
                }
                Cell::Num(_) => {
                    return Err(Error::Parse {
                        row: i + 1,
                        message: "Season must be a label".into(),
                    })
                }
            }
            match &row[freq_idx] {
                Cell::Num(f) => {
                    if !crate::channel::CANONICAL_FREQUENCIES_GHZ
                        .iter()
                        .any(|c| (c - f).abs() < 1e-9)
                    {
                        return Err(Error::Parse {
                            row: i + 1,
                            message: format!("frequency {f} not one of the four scenario bands"),
                        });
                    }
                }
                Cell::Text(t) => {
                    return Err(Error::Parse {
                        row: i + 1,
                        message: format!("frequency cell {t:?} is not numeric"),
                    })
                }
            }
        }
        Ok(())
    }

    /// Remove the ignored columns when present. Idempotent.
    pub fn drop_ignored_columns(&self) -> TabularDataset {
        let keep: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .filter(|(_, c)| !IGNORED_COLUMNS.contains(&c.as_str()))
            .map(|(i, _)| i)
            .collect();
        TabularDataset {
            columns: keep.iter().map(|&i| self.columns[i].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|row| keep.iter().map(|&i| row[i].clone()).collect())
                .collect(),
        }
    }

    /// Deterministic shuffled split; train gets `floor(fraction * rows)`.
    pub fn split(&self, train_fraction: f64, seed: u64) -> Result<(TabularDataset, TabularDataset)> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::Domain(format!(
                "train fraction {train_fraction} outside (0, 1)"
            )));
        }
        if self.n_rows() < 2 {
            return Err(Error::Domain(format!(
                "need at least 2 rows to split, got {}",
                self.n_rows()
            )));
        }
        let n_train = (train_fraction * self.n_rows() as f64).floor() as usize;
        if n_train == 0 || n_train == self.n_rows() {
            return Err(Error::Domain(format!(
                "split of {} rows at {train_fraction} leaves an empty side",
                self.n_rows()
            )));
        }
        let mut indices: Vec<usize> = (0..self.n_rows()).collect();
        indices.shuffle(&mut rng::derive_stream(seed, &[b's' as u64]));
        let pick = |ix: &[usize]| TabularDataset {
            columns: self.columns.clone(),
            rows: ix.iter().map(|&i| self.rows[i].clone()).collect(),
        };
        Ok((pick(&indices[..n_train]), pick(&indices[n_train..])))
    }

    /// Extract features and target for training. The season column is
    /// label-encoded; every other feature cell must be numeric.
    pub fn to_features(&self) -> Result<(FeatureMatrix, Vec<f64>, Vec<String>)> {
        let data = self.drop_ignored_columns();
        let target_idx = data
            .column_index(TARGET_COLUMN)
            .ok_or_else(|| Error::Schema(format!("missing target column {TARGET_COLUMN:?}")))?;
        let feature_idxs: Vec<usize> =
            (0..data.n_cols()).filter(|&i| i != target_idx).collect();
        let names: Vec<String> = feature_idxs
            .iter()
            .map(|&i| data.columns[i].clone())
            .collect();
        let mut features = Vec::with_capacity(data.n_rows() * feature_idxs.len());
        let mut target = Vec::with_capacity(data.n_rows());
        for (row_no, row) in data.rows.iter().enumerate() {
            for &i in &feature_idxs {
                let v = match &row[i] {
                    Cell::Num(v) => *v,
                    Cell::Text(s) if data.columns[i] == "Season" => {
                        encode_season(s)? as f64
                    }
                    Cell::Text(s) => {
                        return Err(Error::Parse {
                            row: row_no + 1,
                            message: format!(
                                "non-numeric cell {s:?} in column {:?}",
                                data.columns[i]
                            ),
                        })
                    }
                };
                if !v.is_finite() {
                    return Err(Error::Parse {
                        row: row_no + 1,
                        message: format!("non-finite value in column {:?}", data.columns[i]),
                    });
                }
                features.push(v);
            }
            match &row[target_idx] {
                Cell::Num(v) if v.is_finite() => target.push(*v),
                _ => {
                    return Err(Error::Parse {
                        row: row_no + 1,
                        message: "target cell missing or non-numeric".into(),
                    })
                }
            }
        }
        Ok((
            FeatureMatrix {
                data: features,
                rows: data.n_rows(),
                cols: feature_idxs.len(),
            },
            target,
            names,
        ))
    }
}

/// Row-major dense feature matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub data: Vec<f64>,
    pub rows: usize,
    pub cols: usize,
}

impl FeatureMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> FeatureMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        FeatureMatrix {
            data: rows.iter().flatten().copied().collect(),
            rows: rows.len(),
            cols,
        }
    }
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
}

/// Alphabetical season codes: Fall 0, Spring 1, Summer 2, Winter 3.
pub fn encode_season(label: &str) -> Result<u8> {
    match label {
        "Fall" => Ok(0),
        "Spring" => Ok(1),
        "Summer" => Ok(2),
        "Winter" => Ok(3),
        other => Err(Error::UnknownLabel(other.to_string())),
    }
}

pub fn decode_season(code: u8) -> Result<Season> {
    match code {
        0 => Ok(Season::Fall),
        1 => Ok(Season::Spring),
        2 => Ok(Season::Summer),
        3 => Ok(Season::Winter),
        other => Err(Error::UnknownLabel(format!("season code {other}"))),
    }
}

/// Per-column z-score statistics fitted on training data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub sigmas: Vec<f64>,
}

impl Standardizer {
    /// Fit on training features (population sigma). Constant columns map
    /// to zero after transform.
    pub fn fit(train: &FeatureMatrix) -> Result<Standardizer> {
        if train.rows == 0 {
            return Err(Error::Domain("cannot standardize an empty matrix".into()));
        }
        let n = train.rows as f64;
        let mut means = vec![0.0; train.cols];
        let mut sigmas = vec![0.0; train.cols];
        for c in 0..train.cols {
            let mean = (0..train.rows).map(|r| train.get(r, c)).sum::<f64>() / n;
            let var = (0..train.rows)
                .map(|r| {
                    let d = train.get(r, c) - mean;
                    d * d
                })
                .sum::<f64>()
                / n;
            means[c] = mean;
            sigmas[c] = var.sqrt();
        }
        Ok(Standardizer { means, sigmas })
    }

    pub fn transform(&self, m: &FeatureMatrix) -> Result<FeatureMatrix> {
        if m.cols != self.means.len() {
            return Err(Error::Shape {
                expected: self.means.len(),
                got: m.cols,
            });
        }
        let mut out = m.clone();
        for r in 0..m.rows {
            for c in 0..m.cols {
                let i = r * m.cols + c;
                out.data[i] = if self.sigmas[c] == 0.0 {
                    0.0
                } else {
                    (m.data[i] - self.means[c]) / self.sigmas[c]
                };
            }
        }
        Ok(out)
    }
}

/// Z-score both sets with statistics fitted on the training set only.
pub fn standardize(
    train: &FeatureMatrix,
    test: &FeatureMatrix,
) -> Result<(FeatureMatrix, FeatureMatrix, Standardizer)> {
    let stats = Standardizer::fit(train)?;
    Ok((stats.transform(train)?, stats.transform(test)?, stats))
}

/// Write the table as UTF-8 comma-separated CSV with a header row.
pub fn write_csv(data: &TabularDataset, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(data.columns())?;
    for row in data.rows() {
        writer.write_record(row.iter().map(|c| c.render()))?;
    }
    writer.flush()?;
    Ok(())
}

/// Read a CSV with a header row. Cells that parse as finite numbers
/// become numeric; everything else stays text. With `strict`, the header
/// must match the canonical schema.
pub fn read_csv(path: &Path, strict: bool) -> Result<TabularDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let columns: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let mut data = TabularDataset::new(columns)?;
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != data.n_cols() {
            return Err(Error::Parse {
                row: i + 1,
                message: format!(
                    "expected {} cells, found {}",
                    data.n_cols(),
                    record.len()
                ),
            });
        }
        let row = record
            .iter()
            .map(|cell| match cell.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Cell::Num(v),
                _ => Cell::Text(cell.to_string()),
            })
            .collect();
        data.push_row(row)?;
    }
    if strict {
        data.check_schema()?;
    }
    Ok(data)
}
