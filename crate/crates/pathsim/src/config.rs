//! Configuration file handling.
//!
//! One TOML file carries the season profiles, the weather-to-attenuation
//! coefficients, and the scenario sweep parameters. The defaults shipped
//! with the crate are embedded at compile time; `Config::load` reads an
//! override from disk. Parse errors surface with line numbers (the TOML
//! parser includes them in its messages).

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CONFIG_VERSION: u32 = 1;

pub const DEFAULT_CONFIG_TOML: &str = include_str!("../assets/default_config.toml");

/// An inclusive `[min, max]` sampling or validation range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range(pub f64, pub f64);

impl Range {
    pub fn min(&self) -> f64 {
        self.0
    }
    pub fn max(&self) -> f64 {
        self.1
    }
    pub fn contains(&self, v: f64) -> bool {
        v >= self.0 && v <= self.1
    }
    fn check_ordered(&self, what: &str) -> Result<()> {
        if self.0 > self.1 {
            return Err(Error::Validation(format!(
                "{what}: min > max ({} > {})",
                self.0, self.1
            )));
        }
        Ok(())
    }
    fn check_within(&self, outer: &Range, what: &str) -> Result<()> {
        self.check_ordered(what)?;
        if self.0 < outer.0 || self.1 > outer.1 {
            return Err(Error::Validation(format!(
                "{what}: range [{}, {}] outside global bounds [{}, {}]",
                self.0, self.1, outer.0, outer.1
            )));
        }
        Ok(())
    }
}

/// Global validation bounds for weather snapshots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub temperature_c: Range,
    pub humidity_pct: Range,
    pub pressure_mbar: Range,
    pub rain_rate_mm_hr: Range,
}

/// Raw per-season ranges as read from file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeasonRanges {
    pub temperature_c: Range,
    pub humidity_pct: Range,
    pub pressure_mbar: Range,
    pub rain_rate_mm_hr: Range,
}

/// One frequency's attenuation coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub frequency_ghz: f64,
    /// Rain power-law factor k, dB/km at 1 mm/hr.
    pub rain_k: f64,
    /// Rain power-law exponent a.
    pub rain_a: f64,
    /// Gas baseline, dB/km.
    pub gas_base: f64,
    /// Gas sensitivity, dB/km per % relative humidity.
    pub gas_per_humidity: f64,
    /// Gas sensitivity, dB/km per degree C above the reference temperature.
    pub gas_per_celsius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttenuationSettings {
    pub foliage_db_per_m: f64,
    pub reference_temperature_c: f64,
    #[serde(default)]
    pub interpolate: bool,
}

/// Scenario sweep parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub distance_min_m: f64,
    pub distance_max_m: f64,
    pub distance_steps: usize,
    pub frequencies_ghz: Vec<f64>,
    pub drops_per_point: usize,
    pub path_loss_exponent: f64,
    pub shadow_sigma_db: f64,
    pub tx_power_dbm: f64,
    pub base_station_height_m: f64,
    pub user_height_m: f64,
    pub human_blockage_enabled: bool,
    pub human_blockage_probability: f64,
    pub human_blockage_mean_db: f64,
    pub foliage_enabled: bool,
    pub n_paths_min: usize,
    pub n_paths_max: usize,
    pub delay_scale_ns: f64,
    pub decay_db_per_ns: f64,
    pub fading_sigma_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub version: u32,
    pub bounds: Bounds,
    pub seasons: BTreeMap<String, SeasonRanges>,
    pub coefficients: Vec<CoefficientEntry>,
    pub attenuation: AttenuationSettings,
    pub scenario: ScenarioConfig,
}

impl Config {
    /// The compiled-in defaults.
    pub fn default_config() -> Config {
        Config::parse(DEFAULT_CONFIG_TOML).expect("bundled default config must parse")
    }

    /// Read a config file, or the defaults when `path` is `None`.
    pub fn load(path: Option<&Path>) -> Result<Config> {
        match path {
            None => Ok(Config::default_config()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    Error::Config(format!("cannot read {}: {e}", p.display()))
                })?;
                Config::parse(&text)
            }
        }
    }

    /// Parse and validate a config document.
    pub fn parse(text: &str) -> Result<Config> {
        let cfg: Config = toml::from_str(text)
            .map_err(|e| Error::Config(format!("{e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(Error::Config(format!(
                "unsupported config version {} (expected {CONFIG_VERSION})",
                self.version
            )));
        }
        for name in ["spring", "summer", "fall", "winter"] {
            let ranges = self
                .seasons
                .get(name)
                .ok_or_else(|| Error::Config(format!("missing season {}", capitalize(name))))?;
            let b = &self.bounds;
            ranges
                .temperature_c
                .check_within(&b.temperature_c, &format!("{name}.temperature_c"))?;
            ranges
                .humidity_pct
                .check_within(&b.humidity_pct, &format!("{name}.humidity_pct"))?;
            ranges
                .pressure_mbar
                .check_within(&b.pressure_mbar, &format!("{name}.pressure_mbar"))?;
            ranges
                .rain_rate_mm_hr
                .check_within(&b.rain_rate_mm_hr, &format!("{name}.rain_rate_mm_hr"))?;
        }
        if let Some(extra) = self
            .seasons
            .keys()
            .find(|k| !matches!(k.as_str(), "spring" | "summer" | "fall" | "winter"))
        {
            return Err(Error::Config(format!("unknown season {extra:?}")));
        }
        if self.coefficients.is_empty() {
            return Err(Error::Config("no coefficient entries".into()));
        }
        for c in &self.coefficients {
            if c.frequency_ghz <= 0.0 {
                return Err(Error::Validation(format!(
                    "coefficients.frequency_ghz must be > 0, got {}",
                    c.frequency_ghz
                )));
            }
            if c.rain_k < 0.0 {
                return Err(Error::Validation(format!(
                    "coefficients.rain_k must be >= 0, got {}",
                    c.rain_k
                )));
            }
            if c.rain_a <= 0.0 {
                return Err(Error::Validation(format!(
                    "coefficients.rain_a must be > 0, got {}",
                    c.rain_a
                )));
            }
            if c.gas_base < 0.0 {
                return Err(Error::Validation(format!(
                    "coefficients.gas_base must be >= 0, got {}",
                    c.gas_base
                )));
            }
        }
        let s = &self.scenario;
        if s.distance_min_m < 1.0 || s.distance_min_m > s.distance_max_m {
            return Err(Error::Validation(format!(
                "scenario distance range [{}, {}] invalid (min >= 1 and min <= max required)",
                s.distance_min_m, s.distance_max_m
            )));
        }
        if s.distance_steps == 0 || s.frequencies_ghz.is_empty() || s.drops_per_point == 0 {
            return Err(Error::Config("empty scenario grid".into()));
        }
        if s.path_loss_exponent <= 0.0 {
            return Err(Error::Validation("path_loss_exponent must be > 0".into()));
        }
        if s.shadow_sigma_db < 0.0 {
            return Err(Error::Validation("shadow_sigma_db must be >= 0".into()));
        }
        if !(0.0..=1.0).contains(&s.human_blockage_probability) {
            return Err(Error::Validation(
                "human_blockage_probability must be in [0, 1]".into(),
            ));
        }
        if s.n_paths_min < 1 || s.n_paths_min > s.n_paths_max {
            return Err(Error::Validation(format!(
                "n_paths range ({}, {}) invalid",
                s.n_paths_min, s.n_paths_max
            )));
        }
        if s.delay_scale_ns <= 0.0 {
            return Err(Error::Validation("delay_scale_ns must be > 0".into()));
        }
        Ok(())
    }
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().collect::<String>() + chars.as_str(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_parses_and_validates() {
        let cfg = Config::default_config();
        assert_eq!(cfg.version, 1);
        assert_eq!(cfg.seasons.len(), 4);
        assert_eq!(cfg.coefficients.len(), 4);
    }

    #[test]
    fn missing_season_reports_name() {
        let text = DEFAULT_CONFIG_TOML.replace("[seasons.winter]", "[seasons_disabled.winter]");
        let err = Config::parse(&text).unwrap_err();
        assert!(err.to_string().contains("missing season Winter"), "{err}");
    }

    #[test]
    fn reversed_range_rejected() {
        let text = DEFAULT_CONFIG_TOML.replace(
            "rain_rate_mm_hr = [0.2, 1.5]",
            "rain_rate_mm_hr = [5.0, 1.0]",
        );
        let err = Config::parse(&text).unwrap_err();
        assert!(err.to_string().contains("min > max"), "{err}");
    }

    #[test]
    fn out_of_bounds_range_names_field() {
        let text = DEFAULT_CONFIG_TOML.replace(
            "temperature_c = [13.0, 26.0]",
            "temperature_c = [5.0, 26.0]",
        );
        let err = Config::parse(&text).unwrap_err();
        assert!(err.to_string().contains("winter.temperature_c"), "{err}");
    }

    #[test]
    fn syntax_error_carries_line_number() {
        let err = Config::parse("version = 1\nbounds = [oops\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn wrong_version_rejected() {
        let text = DEFAULT_CONFIG_TOML.replace("version = 1", "version = 99");
        let err = Config::parse(&text).unwrap_err();
        assert!(err.to_string().contains("version 99"), "{err}");
    }
}
