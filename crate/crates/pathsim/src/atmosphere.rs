//! Seasonal weather profiles and specific attenuation.
//!
//! A weather snapshot (temperature, humidity, pressure, rain rate) is
//! converted into a per-meter attenuation factor through a parametric
//! model: an ITU-style rain power law `k * R^a` plus an affine gas term in
//! humidity and temperature, both tabulated per carrier frequency in the
//! configuration file. Foliage, when enabled, adds a constant dB/m.

use std::fmt;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::{AttenuationSettings, Bounds, CoefficientEntry, Config, SeasonRanges};
use crate::error::{Error, Result};
use crate::rng::Stream;

/// The four season labels, in the fixed artifact order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Season {
    Spring,
    Summer,
    Fall,
    Winter,
}

impl Season {
    pub const ALL: [Season; 4] = [Season::Spring, Season::Summer, Season::Fall, Season::Winter];

    pub fn name(&self) -> &'static str {
        match self {
            Season::Spring => "Spring",
            Season::Summer => "Summer",
            Season::Fall => "Fall",
            Season::Winter => "Winter",
        }
    }

    pub fn from_name(name: &str) -> Result<Season> {
        match name {
            "Spring" => Ok(Season::Spring),
            "Summer" => Ok(Season::Summer),
            "Fall" => Ok(Season::Fall),
            "Winter" => Ok(Season::Winter),
            other => Err(Error::UnknownLabel(other.to_string())),
        }
    }
}

impl fmt::Display for Season {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One weather snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtmosphericState {
    /// Degrees Celsius.
    pub temperature: f64,
    /// Relative humidity, percent.
    pub humidity: f64,
    /// Barometric pressure, mbar.
    pub pressure: f64,
    /// Rain rate, mm/hr.
    pub rain_rate: f64,
}

impl AtmosphericState {
    /// Hard physical invariants, independent of configured bounds.
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=100.0).contains(&self.humidity) {
            return Err(Error::Validation(format!(
                "humidity {} outside [0, 100]",
                self.humidity
            )));
        }
        if self.rain_rate < 0.0 {
            return Err(Error::Validation(format!(
                "rain_rate {} < 0",
                self.rain_rate
            )));
        }
        if self.pressure <= 0.0 {
            return Err(Error::Validation(format!(
                "pressure {} <= 0",
                self.pressure
            )));
        }
        Ok(())
    }

    /// Check against configured bounds. With `strict` false, violations
    /// are returned as warning strings instead of errors.
    pub fn check_bounds(&self, bounds: &Bounds, strict: bool) -> Result<Vec<String>> {
        self.validate()?;
        let mut warnings = Vec::new();
        let checks = [
            ("temperature", self.temperature, bounds.temperature_c),
            ("humidity", self.humidity, bounds.humidity_pct),
            ("pressure", self.pressure, bounds.pressure_mbar),
            ("rain_rate", self.rain_rate, bounds.rain_rate_mm_hr),
        ];
        for (field, value, range) in checks {
            if !range.contains(value) {
                let msg = format!(
                    "{field} {value} outside configured bounds [{}, {}]",
                    range.min(),
                    range.max()
                );
                if strict {
                    return Err(Error::Validation(msg));
                }
                warnings.push(msg);
            }
        }
        Ok(warnings)
    }
}

/// Per-season uniform sampling ranges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeasonProfile {
    pub season: Season,
    pub ranges: SeasonRanges,
}

/// Per-mechanism specific attenuation for one snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttenuationBreakdown {
    /// Gaseous absorption, dB/km.
    pub gas: f64,
    /// Rain attenuation, dB/km.
    pub rain: f64,
    /// Foliage loss, dB/m (0 when disabled).
    pub foliage: f64,
    /// Total attenuation factor, dB/m.
    pub total_alpha: f64,
}

/// Frequency-keyed coefficient table plus the foliage/reference settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttenuationCoefficients {
    entries: Vec<CoefficientEntry>,
    pub settings: AttenuationSettings,
}

impl AttenuationCoefficients {
    pub fn new(mut entries: Vec<CoefficientEntry>, settings: AttenuationSettings) -> Self {
        entries.sort_by(|a, b| a.frequency_ghz.total_cmp(&b.frequency_ghz));
        AttenuationCoefficients { entries, settings }
    }

    pub fn from_config(cfg: &Config) -> Self {
        AttenuationCoefficients::new(cfg.coefficients.clone(), cfg.attenuation)
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.frequency_ghz)
    }

    /// Coefficients at `freq_ghz`: exact table match, or log-frequency
    /// linear interpolation when enabled.
    pub fn lookup(&self, freq_ghz: f64) -> Result<CoefficientEntry> {
        if let Some(e) = self
            .entries
            .iter()
            .find(|e| (e.frequency_ghz - freq_ghz).abs() < 1e-9)
        {
            return Ok(*e);
        }
        if !self.settings.interpolate {
            return Err(Error::UnsupportedFrequency(freq_ghz));
        }
        let (lo, hi) = self
            .entries
            .windows(2)
            .map(|w| (&w[0], &w[1]))
            .find(|(lo, hi)| lo.frequency_ghz < freq_ghz && freq_ghz < hi.frequency_ghz)
            .ok_or(Error::UnsupportedFrequency(freq_ghz))?;
        let t = (freq_ghz.ln() - lo.frequency_ghz.ln())
            / (hi.frequency_ghz.ln() - lo.frequency_ghz.ln());
        let lerp = |a: f64, b: f64| a + t * (b - a);
        Ok(CoefficientEntry {
            frequency_ghz: freq_ghz,
            rain_k: lerp(lo.rain_k, hi.rain_k),
            rain_a: lerp(lo.rain_a, hi.rain_a),
            gas_base: lerp(lo.gas_base, hi.gas_base),
            gas_per_humidity: lerp(lo.gas_per_humidity, hi.gas_per_humidity),
            gas_per_celsius: lerp(lo.gas_per_celsius, hi.gas_per_celsius),
        })
    }
}

/// Season profiles from a config file, in fixed order Spring, Summer,
/// Fall, Winter. `None` loads the bundled defaults.
pub fn load_season_profiles(config_path: Option<&Path>) -> Result<Vec<SeasonProfile>> {
    let cfg = Config::load(config_path)?;
    Ok(profiles_from_config(&cfg))
}

pub fn profiles_from_config(cfg: &Config) -> Vec<SeasonProfile> {
    Season::ALL
        .iter()
        .filter_map(|&season| {
            cfg.seasons
                .get(&season.name().to_lowercase())
                .map(|&ranges| SeasonProfile { season, ranges })
        })
        .collect()
}

/// Draw one weather snapshot uniformly from the profile's ranges.
pub fn sample_atmosphere(profile: &SeasonProfile, rng: &mut Stream) -> AtmosphericState {
    let draw = |rng: &mut Stream, r: crate::config::Range| {
        if r.min() == r.max() {
            r.min()
        } else {
            rng.gen_range(r.min()..=r.max())
        }
    };
    AtmosphericState {
        temperature: draw(rng, profile.ranges.temperature_c),
        humidity: draw(rng, profile.ranges.humidity_pct),
        pressure: draw(rng, profile.ranges.pressure_mbar),
        rain_rate: draw(rng, profile.ranges.rain_rate_mm_hr),
    }
}

/// Specific attenuation for one snapshot at one carrier frequency.
///
/// rain dB/km = k * R^a, gas dB/km = max(0, g0 + g_h*H + g_t*(T - T_ref)),
/// foliage dB/m when enabled, and
/// total_alpha dB/m = (gas + rain)/1000 + foliage.
pub fn specific_attenuation(
    freq_ghz: f64,
    state: &AtmosphericState,
    coeffs: &AttenuationCoefficients,
    foliage_enabled: bool,
) -> Result<AttenuationBreakdown> {
    state.validate()?;
    let c = coeffs.lookup(freq_ghz)?;
    let rain = if state.rain_rate == 0.0 {
        0.0
    } else {
        c.rain_k * state.rain_rate.powf(c.rain_a)
    };
    let gas = (c.gas_base
        + c.gas_per_humidity * state.humidity
        + c.gas_per_celsius * (state.temperature - coeffs.settings.reference_temperature_c))
        .max(0.0);
    let foliage = if foliage_enabled {
        coeffs.settings.foliage_db_per_m
    } else {
        0.0
    };
    let total_alpha = (gas + rain) / 1000.0 + foliage;
    Ok(AttenuationBreakdown {
        gas,
        rain,
        foliage,
        total_alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Range;
    use crate::rng::derive_stream;
    use approx::assert_abs_diff_eq;

    fn default_coeffs() -> AttenuationCoefficients {
        AttenuationCoefficients::from_config(&Config::default_config())
    }

    fn mid_state() -> AtmosphericState {
        AtmosphericState {
            temperature: 25.0,
            humidity: 60.0,
            pressure: 1008.0,
            rain_rate: 2.0,
        }
    }

    #[test]
    fn default_profiles_cover_global_bounds() {
        let profiles = load_season_profiles(None).unwrap();
        assert_eq!(
            profiles.iter().map(|p| p.season).collect::<Vec<_>>(),
            Season::ALL
        );
        let cfg = Config::default_config();
        let cover = |get: fn(&SeasonRanges) -> Range, outer: Range| {
            let min = profiles
                .iter()
                .map(|p| get(&p.ranges).min())
                .fold(f64::INFINITY, f64::min);
            let max = profiles
                .iter()
                .map(|p| get(&p.ranges).max())
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(min, outer.min());
            assert_eq!(max, outer.max());
        };
        cover(|r| r.temperature_c, cfg.bounds.temperature_c);
        cover(|r| r.humidity_pct, cfg.bounds.humidity_pct);
        cover(|r| r.pressure_mbar, cfg.bounds.pressure_mbar);
        cover(|r| r.rain_rate_mm_hr, cfg.bounds.rain_rate_mm_hr);
    }

    #[test]
    fn degenerate_ranges_give_exact_point() {
        let profile = SeasonProfile {
            season: Season::Winter,
            ranges: SeasonRanges {
                temperature_c: Range(15.0, 15.0),
                humidity_pct: Range(50.0, 50.0),
                pressure_mbar: Range(1010.0, 1010.0),
                rain_rate_mm_hr: Range(0.5, 0.5),
            },
        };
        let mut rng = derive_stream(7, &[]);
        let s = sample_atmosphere(&profile, &mut rng);
        assert_eq!(s.temperature, 15.0);
        assert_eq!(s.humidity, 50.0);
        assert_eq!(s.pressure, 1010.0);
        assert_eq!(s.rain_rate, 0.5);
    }

    #[test]
    fn sampling_is_deterministic_and_in_range() {
        let profiles = load_season_profiles(None).unwrap();
        for p in &profiles {
            let a = sample_atmosphere(p, &mut derive_stream(3, &[1]));
            let b = sample_atmosphere(p, &mut derive_stream(3, &[1]));
            assert_eq!(a, b);
            assert!(p.ranges.temperature_c.contains(a.temperature));
            assert!(p.ranges.humidity_pct.contains(a.humidity));
            assert!(p.ranges.pressure_mbar.contains(a.pressure));
            assert!(p.ranges.rain_rate_mm_hr.contains(a.rain_rate));
        }
    }

    #[test]
    fn uniform_sampling_mean_matches_law_of_large_numbers() {
        // 10 000 humidity draws from [0, 1]; mean must land near 0.5.
        let profile = SeasonProfile {
            season: Season::Summer,
            ranges: SeasonRanges {
                temperature_c: Range(20.0, 20.0),
                humidity_pct: Range(0.0, 1.0),
                pressure_mbar: Range(1005.0, 1005.0),
                rain_rate_mm_hr: Range(1.0, 1.0),
            },
        };
        let mut rng = derive_stream(99, &[]);
        let mean = (0..10_000)
            .map(|_| sample_atmosphere(&profile, &mut rng).humidity)
            .sum::<f64>()
            / 10_000.0;
        assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn zero_rain_rate_gives_zero_rain_component() {
        let coeffs = default_coeffs();
        let state = AtmosphericState {
            rain_rate: 0.0,
            ..mid_state()
        };
        let b = specific_attenuation(24.25, &state, &coeffs, false).unwrap();
        assert_eq!(b.rain, 0.0);
    }

    #[test]
    fn foliage_disabled_gives_zero_foliage() {
        let b = specific_attenuation(24.25, &mid_state(), &default_coeffs(), false).unwrap();
        assert_eq!(b.foliage, 0.0);
        let b = specific_attenuation(24.25, &mid_state(), &default_coeffs(), true).unwrap();
        assert_eq!(b.foliage, 0.4);
    }

    #[test]
    fn identity_power_law_case() {
        // k = 1, a = 1, R = 10.5 -> rain 10.5 dB/km = 0.0105 dB/m.
        let coeffs = AttenuationCoefficients::new(
            vec![CoefficientEntry {
                frequency_ghz: 28.0,
                rain_k: 1.0,
                rain_a: 1.0,
                gas_base: 0.0,
                gas_per_humidity: 0.0,
                gas_per_celsius: 0.0,
            }],
            AttenuationSettings {
                foliage_db_per_m: 0.4,
                reference_temperature_c: 20.0,
                interpolate: false,
            },
        );
        let state = AtmosphericState {
            rain_rate: 10.5,
            ..mid_state()
        };
        let b = specific_attenuation(28.0, &state, &coeffs, false).unwrap();
        assert_abs_diff_eq!(b.rain, 10.5, epsilon = 1e-12);
        assert_abs_diff_eq!(b.total_alpha, 0.0105, epsilon = 1e-12);
    }

    #[test]
    fn all_zero_coefficients_give_exactly_zero_alpha() {
        let coeffs = AttenuationCoefficients::new(
            vec![CoefficientEntry {
                frequency_ghz: 28.0,
                rain_k: 0.0,
                rain_a: 1.0,
                gas_base: 0.0,
                gas_per_humidity: 0.0,
                gas_per_celsius: 0.0,
            }],
            AttenuationSettings {
                foliage_db_per_m: 0.4,
                reference_temperature_c: 20.0,
                interpolate: false,
            },
        );
        let b = specific_attenuation(28.0, &mid_state(), &coeffs, false).unwrap();
        assert_eq!(b.total_alpha, 0.0);
    }

    #[test]
    fn unknown_frequency_without_interpolation_errors() {
        let err = specific_attenuation(28.0, &mid_state(), &default_coeffs(), false).unwrap_err();
        assert!(matches!(err, Error::UnsupportedFrequency(f) if f == 28.0));
    }

    #[test]
    fn interpolation_brackets_tabulated_entries() {
        let mut coeffs = default_coeffs();
        coeffs.settings.interpolate = true;
        let mid = coeffs.lookup(28.0).unwrap();
        let lo = coeffs.lookup(24.25).unwrap();
        let hi = coeffs.lookup(52.6).unwrap();
        assert!(mid.rain_k > lo.rain_k.min(hi.rain_k));
        assert!(mid.rain_k < lo.rain_k.max(hi.rain_k));
        // Outside the table still fails.
        assert!(coeffs.lookup(500.0).is_err());
    }

    #[test]
    fn breakdown_sum_identity_and_monotonicity() {
        let coeffs = default_coeffs();
        let mut rng = derive_stream(5, &[]);
        let profiles = load_season_profiles(None).unwrap();
        for _ in 0..200 {
            for p in &profiles {
                let s = sample_atmosphere(p, &mut rng);
                for f in [7.125, 24.25, 52.6, 71.0] {
                    let b = specific_attenuation(f, &s, &coeffs, false).unwrap();
                    assert!(b.gas >= 0.0 && b.rain >= 0.0 && b.foliage >= 0.0);
                    assert_abs_diff_eq!(
                        b.total_alpha,
                        (b.gas + b.rain) / 1000.0 + b.foliage,
                        epsilon = 1e-12
                    );
                    // More rain, more attenuation.
                    let wetter = AtmosphericState {
                        rain_rate: s.rain_rate + 1.0,
                        ..s
                    };
                    let bw = specific_attenuation(f, &wetter, &coeffs, false).unwrap();
                    assert!(bw.total_alpha >= b.total_alpha);
                    // More humidity, no less attenuation.
                    let damper = AtmosphericState {
                        humidity: (s.humidity + 5.0).min(100.0),
                        ..s
                    };
                    let bd = specific_attenuation(f, &damper, &coeffs, false).unwrap();
                    assert!(bd.total_alpha >= b.total_alpha);
                }
            }
        }
    }
}
