//! Tabulate the deterministic CI path loss (no shadow fading) over the
//! 10-500 m range for the four default carriers.
//!
//! Run with: cargo run --example pathloss_curve

use pathsim::channel::{
    ci_path_loss, distance_grid, ChannelModelParams, CANONICAL_FREQUENCIES_GHZ,
};

fn main() -> pathsim::Result<()> {
    let params = ChannelModelParams {
        path_loss_exponent: 3.2,
        shadow_sigma: 0.0,
        human_blockage_enabled: false,
        ..Default::default()
    };
    let alpha = 0.003; // dB/m, a mid-range atmospheric figure

    print!("{:>9}", "d (m)");
    for freq in CANONICAL_FREQUENCIES_GHZ {
        print!(" {freq:>10.3}");
    }
    println!();
    for d in distance_grid(10.0, 500.0, 11) {
        print!("{d:>9.1}");
        for freq in CANONICAL_FREQUENCIES_GHZ {
            let pl = ci_path_loss(freq, d, &params, alpha, 0.0)?;
            print!(" {pl:>10.3}");
        }
        println!();
    }
    Ok(())
}
