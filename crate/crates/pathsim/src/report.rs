//! Report generation: SVG charts plus CSV sidecars carrying the exact
//! numbers behind each chart.
//!
//! The SVG output is deliberately minimal — hand-written elements, no
//! styling framework — so the files stay small, diffable, and easy to
//! check for well-formedness in tests.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::atmosphere::Season;
use crate::channel::ChannelRecord;
use crate::dataset::{Cell, TabularDataset};
use crate::error::{Error, Result};
use crate::regression::BenchmarkEntry;

/// Published RMSE figures used as context in the comparison chart.
/// Each entry is (citation key, setting, RMSE in dB).
pub const LITERATURE_RMSE: [(&str, &str, f64); 10] = [
    ("[21]", "28 GHz LOS", 4.74),
    ("[21]", "28 GHz NLOS", 39.38),
    ("[21]", "73 GHz", 6.27),
    ("[22]", "mm-wave urban", 8.67),
    ("[23]", "indoor LOS", 4.28),
    ("[23]", "indoor NLOS", 5.60),
    ("[24]", "rural macro", 5.10),
    ("[24]", "urban micro", 44.51),
    ("[24]", "suburban", 6.67),
    ("[24]", "indoor hotspot", 0.72),
];

const CHART_W: f64 = 860.0;
const CHART_H: f64 = 520.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 180.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;

const SERIES_COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// A minimal SVG document builder.
struct Svg {
    body: String,
    width: f64,
    height: f64,
}

impl Svg {
    fn new(width: f64, height: f64) -> Svg {
        Svg {
            body: String::new(),
            width,
            height,
        }
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str, opacity: f64) {
        let _ = writeln!(
            self.body,
            r#"  <rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="{fill}" fill-opacity="{opacity}"/>"#
        );
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64) {
        let _ = writeln!(
            self.body,
            r#"  <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{stroke}" stroke-width="{width}"/>"#
        );
    }

    fn polyline(&mut self, points: &[(f64, f64)], stroke: &str) {
        let pts: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{x:.2},{y:.2}"))
            .collect();
        let _ = writeln!(
            self.body,
            r#"  <polyline points="{}" fill="none" stroke="{stroke}" stroke-width="1.8"/>"#,
            pts.join(" ")
        );
    }

    fn polygon(&mut self, points: &[(f64, f64)], fill: &str, opacity: f64) {
        let pts: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{x:.2},{y:.2}"))
            .collect();
        let _ = writeln!(
            self.body,
            r#"  <polygon points="{}" fill="{fill}" fill-opacity="{opacity}" stroke="none"/>"#,
            pts.join(" ")
        );
    }

    fn text(&mut self, x: f64, y: f64, size: f64, anchor: &str, content: &str) {
        let _ = writeln!(
            self.body,
            r#"  <text x="{x:.2}" y="{y:.2}" font-size="{size}" font-family="sans-serif" text-anchor="{anchor}">{}</text>"#,
            escape_xml(content)
        );
    }

    fn text_rotated(&mut self, x: f64, y: f64, size: f64, content: &str) {
        let _ = writeln!(
            self.body,
            r#"  <text x="{x:.2}" y="{y:.2}" font-size="{size}" font-family="sans-serif" text-anchor="middle" transform="rotate(-90 {x:.2} {y:.2})">{}</text>"#,
            escape_xml(content)
        );
    }

    fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.width, self.height, self.width, self.height, self.body
        )
    }
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Linear map from data space to pixel space.
struct Scale {
    d_min: f64,
    d_max: f64,
    p_min: f64,
    p_max: f64,
}

impl Scale {
    fn map(&self, v: f64) -> f64 {
        if self.d_max == self.d_min {
            return (self.p_min + self.p_max) / 2.0;
        }
        self.p_min + (v - self.d_min) / (self.d_max - self.d_min) * (self.p_max - self.p_min)
    }
}

/// Round axis bounds outward to a tidy step.
fn nice_bounds(min: f64, max: f64) -> (f64, f64, f64) {
    let span = (max - min).max(1e-9);
    let raw_step = span / 6.0;
    let mag = 10f64.powf(raw_step.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw_step)
        .unwrap_or(10.0 * mag);
    ((min / step).floor() * step, (max / step).ceil() * step, step)
}

struct Band {
    distance: f64,
    mean: f64,
    sd: f64,
    count: usize,
}

/// Per-(frequency, distance) mean and standard deviation of path loss.
fn season_bands(records: &[ChannelRecord], season: Season) -> BTreeMap<u64, Vec<Band>> {
    let mut groups: BTreeMap<u64, BTreeMap<u64, Vec<f64>>> = BTreeMap::new();
    for rec in records.iter().filter(|r| r.season == season) {
        groups
            .entry(rec.frequency_ghz.to_bits())
            .or_default()
            .entry(rec.t_r_separation_m.to_bits())
            .or_default()
            .push(rec.path_loss_db);
    }
    groups
        .into_iter()
        .map(|(freq_bits, by_dist)| {
            let mut bands: Vec<Band> = by_dist
                .into_iter()
                .map(|(dist_bits, losses)| {
                    let n = losses.len() as f64;
                    let mean = losses.iter().sum::<f64>() / n;
                    let var =
                        losses.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
                    Band {
                        distance: f64::from_bits(dist_bits),
                        mean,
                        sd: var.sqrt(),
                        count: losses.len(),
                    }
                })
                .collect();
            bands.sort_by(|a, b| a.distance.total_cmp(&b.distance));
            (freq_bits, bands)
        })
        .collect()
}

fn axes(
    svg: &mut Svg,
    scale_x: &Scale,
    scale_y: &Scale,
    step_x: f64,
    step_y: f64,
    x_label: &str,
    y_label: &str,
    title: &str,
) {
    let (x0, x1) = (scale_x.p_min, scale_x.p_max);
    let (y0, y1) = (scale_y.p_min, scale_y.p_max);
    svg.line(x0, y0, x1, y0, "#333", 1.0);
    svg.line(x0, y0, x0, y1, "#333", 1.0);
    let mut v = scale_x.d_min;
    while v <= scale_x.d_max + 1e-9 {
        let px = scale_x.map(v);
        svg.line(px, y0, px, y0 + 4.0, "#333", 1.0);
        svg.text(px, y0 + 18.0, 11.0, "middle", &trim_tick(v));
        v += step_x;
    }
    let mut v = scale_y.d_min;
    while v <= scale_y.d_max + 1e-9 {
        let py = scale_y.map(v);
        svg.line(x0 - 4.0, py, x0, py, "#333", 1.0);
        svg.line(x0, py, x1, py, "#eee", 0.6);
        svg.text(x0 - 8.0, py + 4.0, 11.0, "end", &trim_tick(v));
        v += step_y;
    }
    svg.text((x0 + x1) / 2.0, y0 + 40.0, 13.0, "middle", x_label);
    svg.text_rotated(x0 - 48.0, (y0 + y1) / 2.0, 13.0, y_label);
    svg.text((x0 + x1) / 2.0, MARGIN_T - 14.0, 15.0, "middle", title);
}

fn trim_tick(v: f64) -> String {
    if (v - v.round()).abs() < 1e-9 {
        format!("{}", v.round() as i64)
    } else {
        format!("{v:.2}")
    }
}

/// Mean path loss vs distance for one season, one line per frequency,
/// with a +/-1 sigma shaded band. Returns the SVG and sidecar CSV paths.
pub fn season_chart(
    records: &[ChannelRecord],
    season: Season,
    out_dir: &Path,
) -> Result<(PathBuf, PathBuf)> {
    let bands = season_bands(records, season);
    if bands.is_empty() {
        return Err(Error::Domain(format!(
            "no records for season {}",
            season.name()
        )));
    }
    let mut pl_min = f64::INFINITY;
    let mut pl_max = f64::NEG_INFINITY;
    let mut d_min = f64::INFINITY;
    let mut d_max = f64::NEG_INFINITY;
    for series in bands.values() {
        for b in series {
            pl_min = pl_min.min(b.mean - b.sd);
            pl_max = pl_max.max(b.mean + b.sd);
            d_min = d_min.min(b.distance);
            d_max = d_max.max(b.distance);
        }
    }
    let (dx0, dx1, step_x) = nice_bounds(d_min, d_max);
    let (dy0, dy1, step_y) = nice_bounds(pl_min, pl_max);
    let scale_x = Scale {
        d_min: dx0,
        d_max: dx1,
        p_min: MARGIN_L,
        p_max: CHART_W - MARGIN_R,
    };
    let scale_y = Scale {
        d_min: dy0,
        d_max: dy1,
        p_min: CHART_H - MARGIN_B,
        p_max: MARGIN_T,
    };

    let mut svg = Svg::new(CHART_W, CHART_H);
    let title = format!("{} mean path loss vs distance", season.name());
    axes(
        &mut svg,
        &scale_x,
        &scale_y,
        step_x,
        step_y,
        "T-R separation (m)",
        "Path loss (dB)",
        &title,
    );

    let mut sidecar = TabularDataset::new(
        ["Season", "Frequency (GHz)", "Distance (m)", "Mean Path Loss (dB)", "Std Dev (dB)", "Samples"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    )?;
    for (i, (freq_bits, series)) in bands.iter().enumerate() {
        let freq = f64::from_bits(*freq_bits);
        let color = SERIES_COLORS[i % SERIES_COLORS.len()];
        let mut upper: Vec<(f64, f64)> = Vec::new();
        let mut lower: Vec<(f64, f64)> = Vec::new();
        let mut mid: Vec<(f64, f64)> = Vec::new();
        for b in series {
            let px = scale_x.map(b.distance);
            upper.push((px, scale_y.map(b.mean + b.sd)));
            lower.push((px, scale_y.map(b.mean - b.sd)));
            mid.push((px, scale_y.map(b.mean)));
            sidecar.push_row(vec![
                Cell::Text(season.name().to_string()),
                Cell::Num(freq),
                Cell::Num(b.distance),
                Cell::Num(b.mean),
                Cell::Num(b.sd),
                Cell::Num(b.count as f64),
            ])?;
        }
        let mut band: Vec<(f64, f64)> = upper.clone();
        band.extend(lower.iter().rev());
        svg.polygon(&band, color, 0.15);
        svg.polyline(&mid, color);
        let ly = MARGIN_T + 16.0 * i as f64 + 10.0;
        let lx = CHART_W - MARGIN_R + 16.0;
        svg.line(lx, ly - 4.0, lx + 22.0, ly - 4.0, color, 2.0);
        svg.text(lx + 28.0, ly, 11.0, "start", &format!("{freq} GHz"));
    }

    std::fs::create_dir_all(out_dir)?;
    let slug = season.name().to_ascii_lowercase();
    let svg_path = out_dir.join(format!("pathloss_{slug}.svg"));
    let csv_path = out_dir.join(format!("pathloss_{slug}.csv"));
    std::fs::write(&svg_path, svg.finish())?;
    crate::dataset::write_csv(&sidecar, &csv_path)?;
    Ok((svg_path, csv_path))
}

/// Generic vertical bar chart shared by the two comparison figures.
fn bar_chart(
    labels: &[String],
    values: &[f64],
    colors: &[&str],
    y_label: &str,
    title: &str,
) -> String {
    let v_max = values.iter().cloned().fold(0.0_f64, f64::max);
    let v_min = values.iter().cloned().fold(0.0_f64, f64::min);
    let (dy0, dy1, step_y) = nice_bounds(v_min.min(0.0), v_max.max(1e-9));
    let scale_y = Scale {
        d_min: dy0,
        d_max: dy1,
        p_min: CHART_H - MARGIN_B,
        p_max: MARGIN_T,
    };
    let x0 = MARGIN_L;
    let x1 = CHART_W - 30.0;
    let mut svg = Svg::new(CHART_W, CHART_H);
    svg.line(x0, scale_y.p_min, x1, scale_y.p_min, "#333", 1.0);
    svg.line(x0, scale_y.p_min, x0, scale_y.p_max, "#333", 1.0);
    let mut v = dy0;
    while v <= dy1 + 1e-9 {
        let py = scale_y.map(v);
        svg.line(x0 - 4.0, py, x0, py, "#333", 1.0);
        svg.line(x0, py, x1, py, "#eee", 0.6);
        svg.text(x0 - 8.0, py + 4.0, 11.0, "end", &trim_tick(v));
        v += step_y;
    }
    svg.text_rotated(x0 - 48.0, (scale_y.p_min + scale_y.p_max) / 2.0, 13.0, y_label);
    svg.text((x0 + x1) / 2.0, MARGIN_T - 14.0, 15.0, "middle", title);

    let n = labels.len().max(1) as f64;
    let slot = (x1 - x0) / n;
    let bar_w = slot * 0.62;
    for (i, (label, &value)) in labels.iter().zip(values).enumerate() {
        let cx = x0 + slot * (i as f64 + 0.5);
        let top = scale_y.map(value.max(0.0));
        let bottom = scale_y.map(value.min(0.0));
        svg.rect(
            cx - bar_w / 2.0,
            top.min(bottom),
            bar_w,
            (bottom - top).abs().max(0.5),
            colors[i % colors.len()],
            0.9,
        );
        let vy = if value >= 0.0 { top - 5.0 } else { bottom + 14.0 };
        svg.text(cx, vy, 10.0, "middle", &format!("{value:.2}"));
        svg.text_rotated(cx, scale_y.p_min + 34.0, 10.0, label);
    }
    svg.finish()
}

/// Test-set R-squared for each successful model, one bar per model.
pub fn r2_chart(entries: &[BenchmarkEntry], out_dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let ok: Vec<_> = entries
        .iter()
        .filter_map(|e| e.outcome.as_ref().ok().map(|m| (e.kind, m)))
        .collect();
    if ok.is_empty() {
        return Err(Error::Domain("no successful models to chart".into()));
    }
    let labels: Vec<String> = ok.iter().map(|(k, _)| k.label().to_string()).collect();
    let values: Vec<f64> = ok.iter().map(|(_, m)| m.r2).collect();
    let svg = bar_chart(&labels, &values, &SERIES_COLORS, "R²", "Model fit (test set R²)");

    let mut sidecar = TabularDataset::new(
        ["Model", "MAE", "MSE", "RMSE", "R2"].iter().map(|s| s.to_string()).collect(),
    )?;
    for (kind, m) in &ok {
        sidecar.push_row(vec![
            Cell::Text(kind.label().to_string()),
            Cell::Num(m.mae),
            Cell::Num(m.mse),
            Cell::Num(m.rmse),
            Cell::Num(m.r2),
        ])?;
    }
    std::fs::create_dir_all(out_dir)?;
    let svg_path = out_dir.join("model_r2.svg");
    let csv_path = out_dir.join("model_metrics.csv");
    std::fs::write(&svg_path, svg)?;
    crate::dataset::write_csv(&sidecar, &csv_path)?;
    Ok((svg_path, csv_path))
}

/// RMSE of this run's models side by side with published figures.
pub fn rmse_comparison_chart(
    entries: &[BenchmarkEntry],
    out_dir: &Path,
) -> Result<(PathBuf, PathBuf)> {
    let mut labels: Vec<String> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut colors: Vec<&str> = Vec::new();
    let mut sidecar = TabularDataset::new(
        ["Source", "Setting", "RMSE (dB)"].iter().map(|s| s.to_string()).collect(),
    )?;
    for e in entries {
        if let Ok(m) = &e.outcome {
            labels.push(e.kind.label().to_string());
            values.push(m.rmse);
            colors.push("#1f77b4");
            sidecar.push_row(vec![
                Cell::Text("this run".to_string()),
                Cell::Text(e.kind.label().to_string()),
                Cell::Num(m.rmse),
            ])?;
        }
    }
    if labels.is_empty() {
        return Err(Error::Domain("no successful models to chart".into()));
    }
    for (key, setting, rmse) in LITERATURE_RMSE {
        labels.push(format!("{key} {setting}"));
        values.push(rmse);
        colors.push("#bbbbbb");
        sidecar.push_row(vec![
            Cell::Text(key.to_string()),
            Cell::Text(setting.to_string()),
            Cell::Num(rmse),
        ])?;
    }
    let svg = bar_chart(
        &labels,
        &values,
        &colors,
        "RMSE (dB)",
        "RMSE vs published results",
    );
    std::fs::create_dir_all(out_dir)?;
    let svg_path = out_dir.join("rmse_comparison.svg");
    let csv_path = out_dir.join("rmse_comparison.csv");
    std::fs::write(&svg_path, svg)?;
    crate::dataset::write_csv(&sidecar, &csv_path)?;
    Ok((svg_path, csv_path))
}

/// All report artifacts for one run: four season charts plus the two
/// model comparison charts, each with a CSV sidecar.
pub fn full_report(
    records: &[ChannelRecord],
    entries: &[BenchmarkEntry],
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for season in Season::ALL {
        let (svg, csv) = season_chart(records, season, out_dir)?;
        written.push(svg);
        written.push(csv);
    }
    let (svg, csv) = r2_chart(entries, out_dir)?;
    written.push(svg);
    written.push(csv);
    let (svg, csv) = rmse_comparison_chart(entries, out_dir)?;
    written.push(svg);
    written.push(csv);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::regression::metrics::MetricsReport;
    use crate::regression::RegressorKind;
    use quick_xml::events::Event;
    use quick_xml::Reader;
    use tempfile::tempdir;

    fn assert_well_formed(path: &Path) {
        let text = std::fs::read_to_string(path).unwrap();
        let mut reader = Reader::from_str(&text);
        let mut depth = 0i32;
        loop {
            match reader.read_event() {
                Ok(Event::Start(_)) => depth += 1,
                Ok(Event::End(_)) => depth -= 1,
                Ok(Event::Eof) => break,
                Ok(_) => {}
                Err(e) => panic!("malformed XML in {}: {e}", path.display()),
            }
        }
        assert_eq!(depth, 0, "unbalanced tags in {}", path.display());
    }

    fn sample_records() -> Vec<ChannelRecord> {
        let cfg = Config::default_config();
        crate::channel::sweep_scenario(&cfg, 7).unwrap()
    }

    fn sample_entries() -> Vec<BenchmarkEntry> {
        let mut entries: Vec<BenchmarkEntry> = RegressorKind::ALL
            .iter()
            .enumerate()
            .map(|(i, &kind)| BenchmarkEntry {
                kind,
                outcome: Ok(MetricsReport {
                    mae: 1.0 + i as f64 * 0.3,
                    mse: 2.0 + i as f64,
                    rmse: (2.0 + i as f64).sqrt(),
                    r2: 0.9 - i as f64 * 0.05,
                }),
            })
            .collect();
        entries[8].outcome = Err("did not converge".to_string());
        entries
    }

    #[test]
    fn season_charts_are_well_formed_with_sidecars() {
        let records = sample_records();
        let dir = tempdir().unwrap();
        for season in Season::ALL {
            let (svg, csv) = season_chart(&records, season, dir.path()).unwrap();
            assert_well_formed(&svg);
            let side = crate::dataset::read_csv(&csv, false).unwrap();
            assert!(side.n_rows() > 0);
            assert_eq!(side.n_cols(), 6);
        }
    }

    #[test]
    fn season_chart_rejects_missing_season() {
        let records: Vec<ChannelRecord> = sample_records()
            .into_iter()
            .filter(|r| r.season != Season::Winter)
            .collect();
        let dir = tempdir().unwrap();
        assert!(season_chart(&records, Season::Winter, dir.path()).is_err());
    }

    #[test]
    fn model_charts_are_well_formed() {
        let dir = tempdir().unwrap();
        let entries = sample_entries();
        let (svg, csv) = r2_chart(&entries, dir.path()).unwrap();
        assert_well_formed(&svg);
        assert_eq!(crate::dataset::read_csv(&csv, false).unwrap().n_rows(), 8);
        let (svg2, csv2) = rmse_comparison_chart(&entries, dir.path()).unwrap();
        assert_well_formed(&svg2);
        // 8 successful models + 10 published figures.
        assert_eq!(crate::dataset::read_csv(&csv2, false).unwrap().n_rows(), 18);
    }

    #[test]
    fn comparison_chart_embeds_published_values() {
        let dir = tempdir().unwrap();
        let (_, csv) = rmse_comparison_chart(&sample_entries(), dir.path()).unwrap();
        let side = crate::dataset::read_csv(&csv, false).unwrap();
        let rmses: Vec<f64> = side
            .rows()
            .iter()
            .filter(|row| matches!(&row[0], Cell::Text(s) if s.starts_with('[')))
            .map(|row| row[2].as_f64().unwrap())
            .collect();
        assert!(rmses.contains(&6.27));
        assert!(rmses.contains(&8.67));
        assert!(rmses.contains(&5.60));
        assert!(rmses.contains(&6.67));
    }

    #[test]
    fn full_report_writes_twelve_files() {
        let dir = tempdir().unwrap();
        let files = full_report(&sample_records(), &sample_entries(), dir.path()).unwrap();
        assert_eq!(files.len(), 12);
        for f in &files {
            assert!(f.exists(), "{}", f.display());
        }
    }
}
