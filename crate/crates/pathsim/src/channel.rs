//! Close-in (CI) path-loss model and channel-record synthesis.
//!
//! Path loss anchors at a 1 m free-space reference:
//!
//! ```text
//! PL(f, d) = FSPL(f) + 10 n log10(d) + alpha * d + shadow
//! FSPL(f)  = 32.4 + 20 log10(f_GHz)        (dB at 1 m)
//! ```
//!
//! where `alpha` (dB/m) comes from the atmosphere module and `shadow` is a
//! zero-mean Gaussian draw in dB. A simplified multipath generator stands
//! in for a full cluster model: exponential excess delays with linear
//! power decay and uniform angles, enough to produce schema-valid,
//! statistically controlled records.

use rand::Rng;
use rand_distr::{Distribution, Exp, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atmosphere::{
    sample_atmosphere, specific_attenuation, AttenuationCoefficients, Season, SeasonProfile,
};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::rng::{derive_stream, Stream};

/// The four carrier frequencies of the canonical scenario, GHz.
pub const CANONICAL_FREQUENCIES_GHZ: [f64; 4] = [7.125, 24.25, 52.6, 71.0];

/// Transmitter-receiver link geometry and power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    /// 3-D T-R separation, m. Must be >= 1 (the CI reference distance).
    pub distance: f64,
    pub base_station_height: f64,
    pub user_height: f64,
    pub tx_power_dbm: f64,
}

impl LinkGeometry {
    pub fn new(distance: f64) -> Result<LinkGeometry> {
        if distance < 1.0 {
            return Err(Error::Domain(format!(
                "distance {distance} m below the 1 m CI reference distance"
            )));
        }
        Ok(LinkGeometry {
            distance,
            base_station_height: 32.0,
            user_height: 1.5,
            tx_power_dbm: 30.0,
        })
    }
}

/// Large-scale channel model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelModelParams {
    /// Path-loss exponent n.
    pub path_loss_exponent: f64,
    /// Shadow-fading standard deviation, dB.
    pub shadow_sigma: f64,
    pub human_blockage_enabled: bool,
    pub human_blockage_mean_db: f64,
    pub human_blockage_probability: f64,
    pub foliage_enabled: bool,
}

impl Default for ChannelModelParams {
    fn default() -> Self {
        ChannelModelParams {
            path_loss_exponent: 3.2,
            shadow_sigma: 8.0,
            human_blockage_enabled: true,
            human_blockage_mean_db: 14.4,
            human_blockage_probability: 0.2,
            foliage_enabled: false,
        }
    }
}

/// Simplified multipath generator controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultipathParams {
    pub n_paths_min: usize,
    pub n_paths_max: usize,
    /// Mean excess delay of the exponential draw, ns.
    pub delay_scale_ns: f64,
    /// Linear power decay, dB per ns of excess delay.
    pub decay_db_per_ns: f64,
    /// Per-path small-scale fading standard deviation, dB. Applied on
    /// top of the deterministic decay before normalization.
    pub fading_sigma_db: f64,
}

impl Default for MultipathParams {
    fn default() -> Self {
        MultipathParams {
            n_paths_min: 2,
            n_paths_max: 6,
            delay_scale_ns: 50.0,
            decay_db_per_ns: 0.1,
            fading_sigma_db: 6.0,
        }
    }
}

/// One resolved propagation path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultipathComponent {
    /// Excess delay, ns.
    pub delay_ns: f64,
    /// Power relative to the strongest path, dB (<= 0).
    pub relative_power_db: f64,
    /// Carrier phase, rad in [0, 2pi).
    pub phase_rad: f64,
    pub aod_azimuth_deg: f64,
    pub aod_elevation_deg: f64,
    pub aoa_azimuth_deg: f64,
    pub aoa_elevation_deg: f64,
}

/// One dataset row: the twelve-column schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRecord {
    pub t_r_separation_m: f64,
    pub time_delay_ns: f64,
    pub received_power_dbm: f64,
    pub phase_rad: f64,
    pub azimuth_aod_deg: f64,
    pub elevation_aod_deg: f64,
    pub azimuth_aoa_deg: f64,
    pub elevation_aoa_deg: f64,
    pub rms_delay_spread_ns: f64,
    pub season: Season,
    pub frequency_ghz: f64,
    pub path_loss_db: f64,
}

/// Free-space path loss at the 1 m reference distance, dB.
pub fn fspl(freq_ghz: f64) -> Result<f64> {
    if freq_ghz <= 0.0 {
        return Err(Error::Domain(format!(
            "carrier frequency must be > 0 GHz, got {freq_ghz}"
        )));
    }
    Ok(32.4 + 20.0 * freq_ghz.log10())
}

/// Deterministic CI path loss, dB. The shadow draw is supplied by the
/// caller (0 for mean path loss).
pub fn ci_path_loss(
    freq_ghz: f64,
    distance_m: f64,
    params: &ChannelModelParams,
    total_alpha_db_per_m: f64,
    shadow_draw_db: f64,
) -> Result<f64> {
    if distance_m < 1.0 {
        return Err(Error::Domain(format!(
            "distance {distance_m} m below the 1 m CI reference distance"
        )));
    }
    if total_alpha_db_per_m < 0.0 {
        return Err(Error::Domain(format!(
            "attenuation factor must be >= 0, got {total_alpha_db_per_m}"
        )));
    }
    Ok(fspl(freq_ghz)?
        + 10.0 * params.path_loss_exponent * distance_m.log10()
        + total_alpha_db_per_m * distance_m
        + shadow_draw_db)
}

/// Power-weighted RMS spread of the component delays, ns.
pub fn rms_delay_spread(components: &[MultipathComponent]) -> Result<f64> {
    if components.is_empty() {
        return Err(Error::Domain("empty multipath component sequence".into()));
    }
    let mut p_sum = 0.0;
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for c in components {
        let p = 10f64.powf(c.relative_power_db / 10.0);
        p_sum += p;
        m1 += p * c.delay_ns;
        m2 += p * c.delay_ns * c.delay_ns;
    }
    let mean = m1 / p_sum;
    Ok((m2 / p_sum - mean * mean).max(0.0).sqrt())
}

/// Draw a multipath profile: exponential excess delays, linear power
/// decay with bounded jitter, uniform angles. The strongest path is
/// normalized to 0 dB and the first arrival has zero excess delay.
pub fn sample_multipath(
    rng: &mut Stream,
    params: &MultipathParams,
) -> Result<Vec<MultipathComponent>> {
    if params.n_paths_min < 1 || params.n_paths_min > params.n_paths_max {
        return Err(Error::Domain(format!(
            "path count range ({}, {}) invalid",
            params.n_paths_min, params.n_paths_max
        )));
    }
    if params.delay_scale_ns <= 0.0 {
        return Err(Error::Domain("delay scale must be > 0".into()));
    }
    let n = rng.gen_range(params.n_paths_min..=params.n_paths_max);
    let exp = Exp::new(1.0 / params.delay_scale_ns).expect("positive rate");
    let mut delays = Vec::with_capacity(n);
    delays.push(0.0);
    for _ in 1..n {
        delays.push(exp.sample(rng));
    }
    delays.sort_by(f64::total_cmp);

    if params.fading_sigma_db < 0.0 {
        return Err(Error::Domain("fading sigma must be >= 0".into()));
    }
    let fading = if params.fading_sigma_db > 0.0 {
        Some(Normal::new(0.0, params.fading_sigma_db).expect("sigma > 0"))
    } else {
        None
    };
    let mut components: Vec<MultipathComponent> = delays
        .into_iter()
        .map(|delay_ns| {
            let jitter = fading.map_or(0.0, |dist| dist.sample(rng));
            MultipathComponent {
                delay_ns,
                relative_power_db: -params.decay_db_per_ns * delay_ns + jitter,
                phase_rad: rng.gen_range(0.0..std::f64::consts::TAU),
                aod_azimuth_deg: rng.gen_range(0.0..360.0),
                aod_elevation_deg: rng.gen_range(-90.0..=90.0),
                aoa_azimuth_deg: rng.gen_range(0.0..360.0),
                aoa_elevation_deg: rng.gen_range(-90.0..=90.0),
            }
        })
        .collect();
    let strongest = components
        .iter()
        .map(|c| c.relative_power_db)
        .fold(f64::NEG_INFINITY, f64::max);
    for c in &mut components {
        c.relative_power_db -= strongest;
    }
    Ok(components)
}

/// Simulate one drop: weather draw, attenuation, shadow, blockage,
/// multipath, and one record per resolved path.
pub fn simulate_drop(
    geometry: &LinkGeometry,
    params: &ChannelModelParams,
    multipath: &MultipathParams,
    freq_ghz: f64,
    season: &SeasonProfile,
    coeffs: &AttenuationCoefficients,
    rng: &mut Stream,
) -> Result<Vec<ChannelRecord>> {
    let state = sample_atmosphere(season, rng);
    let breakdown = specific_attenuation(freq_ghz, &state, coeffs, params.foliage_enabled)?;
    let shadow = if params.shadow_sigma > 0.0 {
        Normal::new(0.0, params.shadow_sigma)
            .expect("sigma >= 0")
            .sample(rng)
    } else {
        0.0
    };
    let mut path_loss = ci_path_loss(
        freq_ghz,
        geometry.distance,
        params,
        breakdown.total_alpha,
        shadow,
    )?;
    if params.human_blockage_enabled && rng.gen_bool(params.human_blockage_probability) {
        path_loss += params.human_blockage_mean_db;
    }
    let components = sample_multipath(rng, multipath)?;
    let spread = rms_delay_spread(&components)?;
    Ok(components
        .into_iter()
        .map(|c| ChannelRecord {
            t_r_separation_m: geometry.distance,
            time_delay_ns: c.delay_ns,
            received_power_dbm: geometry.tx_power_dbm - path_loss + c.relative_power_db,
            phase_rad: c.phase_rad,
            azimuth_aod_deg: c.aod_azimuth_deg,
            elevation_aod_deg: c.aod_elevation_deg,
            azimuth_aoa_deg: c.aoa_azimuth_deg,
            elevation_aoa_deg: c.aoa_elevation_deg,
            rms_delay_spread_ns: spread,
            season: season.season,
            frequency_ghz: freq_ghz,
            path_loss_db: path_loss,
        })
        .collect())
}

/// The distance grid of a scenario: `steps` points spaced evenly over
/// `[min, max]` (just `min` when steps = 1).
pub fn distance_grid(min_m: f64, max_m: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min_m];
    }
    (0..steps)
        .map(|i| min_m + (max_m - min_m) * i as f64 / (steps - 1) as f64)
        .collect()
}

/// Sweep the full scenario grid. Deterministic for a fixed master seed
/// regardless of thread count: each (season, frequency, distance, drop)
/// point gets its own derived substream and rows come out in canonical
/// order (season, frequency, distance, drop, delay).
pub fn sweep_scenario(cfg: &Config, master_seed: u64) -> Result<Vec<ChannelRecord>> {
    let sc = &cfg.scenario;
    if sc.distance_steps == 0 || sc.frequencies_ghz.is_empty() || sc.drops_per_point == 0 {
        return Err(Error::Config("empty scenario grid".into()));
    }
    let coeffs = AttenuationCoefficients::from_config(cfg);
    let profiles = crate::atmosphere::profiles_from_config(cfg);
    let params = ChannelModelParams {
        path_loss_exponent: sc.path_loss_exponent,
        shadow_sigma: sc.shadow_sigma_db,
        human_blockage_enabled: sc.human_blockage_enabled,
        human_blockage_mean_db: sc.human_blockage_mean_db,
        human_blockage_probability: sc.human_blockage_probability,
        foliage_enabled: sc.foliage_enabled,
    };
    let multipath = MultipathParams {
        n_paths_min: sc.n_paths_min,
        n_paths_max: sc.n_paths_max,
        delay_scale_ns: sc.delay_scale_ns,
        decay_db_per_ns: sc.decay_db_per_ns,
        fading_sigma_db: sc.fading_sigma_db,
    };
    let distances = distance_grid(sc.distance_min_m, sc.distance_max_m, sc.distance_steps);

    let mut points = Vec::new();
    for (season_idx, profile) in profiles.iter().enumerate() {
        for (freq_idx, &freq) in sc.frequencies_ghz.iter().enumerate() {
            for (dist_idx, &distance) in distances.iter().enumerate() {
                for drop_idx in 0..sc.drops_per_point {
                    points.push((season_idx, freq_idx, dist_idx, drop_idx, *profile, freq, distance));
                }
            }
        }
    }

    let per_point: Vec<Result<Vec<ChannelRecord>>> = points
        .par_iter()
        .map(|&(season_idx, freq_idx, dist_idx, drop_idx, profile, freq, distance)| {
            let mut rng = derive_stream(
                master_seed,
                &[
                    season_idx as u64,
                    freq_idx as u64,
                    dist_idx as u64,
                    drop_idx as u64,
                ],
            );
            let geometry = LinkGeometry {
                distance,
                base_station_height: sc.base_station_height_m,
                user_height: sc.user_height_m,
                tx_power_dbm: sc.tx_power_dbm,
            };
            simulate_drop(&geometry, &params, &multipath, freq, &profile, &coeffs, &mut rng)
        })
        .collect();

    let mut rows = Vec::new();
    for drop in per_point {
        rows.extend(drop?);
    }
    Ok(rows)
}
