//! Print the specific-attenuation breakdown (gas, rain, foliage) for a
//! typical weather draw in each season, at each configured frequency.
//!
//! Run with: cargo run --example attenuation_profile

use pathsim::atmosphere::{
    profiles_from_config, sample_atmosphere, specific_attenuation, AttenuationCoefficients,
};
use pathsim::config::Config;
use pathsim::rng::derive_stream;

fn main() -> pathsim::Result<()> {
    let cfg = Config::default_config();
    let coeffs = AttenuationCoefficients::from_config(&cfg);
    let mut rng = derive_stream(2024, &[]);

    println!(
        "{:<8} {:>7} {:>8} {:>8} {:>8} {:>12}",
        "Season", "f(GHz)", "gas", "rain", "foliage", "total(dB/m)"
    );
    for profile in profiles_from_config(&cfg) {
        let state = sample_atmosphere(&profile, &mut rng);
        for freq in cfg.scenario.frequencies_ghz.iter().copied() {
            let b = specific_attenuation(freq, &state, &coeffs, false)?;
            println!(
                "{:<8} {:>7.3} {:>8.4} {:>8.4} {:>8.4} {:>12.6}",
                profile.season.name(),
                freq,
                b.gas,
                b.rain,
                b.foliage,
                b.total_alpha
            );
        }
        println!(
            "  weather: {:.1} C, {:.0}% RH, {:.0} mbar, {:.1} mm/hr",
            state.temperature, state.humidity, state.pressure, state.rain_rate
        );
    }
    Ok(())
}
