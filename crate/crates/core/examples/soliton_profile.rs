//! Builds solitary waves for a few speeds and checks the amplitude and decay laws.
//!
//! cargo run --release --example soliton_profile [out_dir]

use std::path::PathBuf;

use dispersive_wave::io::write_profile;
use dispersive_wave::model::PdeParams;
use dispersive_wave::solitary::{build_profile, check_admissible, SolitonParams};
use dispersive_wave::spectral::GridSpec;

fn main() -> dispersive_wave::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("output/profiles"));
    let grid = GridSpec::new(50.0, 4096)?;

    println!("{:>5} {:>5} {:>5} {:>9} {:>9} {:>9} {:>10} {:>10}", "c", "omega", "gamma", "a", "kappa", "measured", "first-int", "balance");
    for (c, omega, gamma) in [(2.0, 0.5, 1.0), (1.5, 0.5, -1.0), (3.0, 1.0, 0.0), (1.8, 0.5, 2.0), (2.0, 0.5, 3.0)] {
        let p = SolitonParams::new(c, PdeParams::new(gamma, omega)?)?;
        let adm = check_admissible(&p);
        if !adm.is_admissible() {
            println!("{c:>5} {omega:>5} {gamma:>5}  skipped: {}", adm.diagnostic());
            continue;
        }
        let profile = build_profile(&p, &grid)?;
        println!(
            "{c:>5} {omega:>5} {gamma:>5} {:>9.6} {:>9.6} {:>9.6} {:>10.2e} {:>10.2e}",
            profile.amplitude(),
            p.decay_rate(),
            profile.decay_rate,
            profile.first_integral_residual(),
            profile.momentum_balance_residual()
        );
        write_profile(&out.join(format!("profile_c{c}_w{omega}_g{gamma}.csv")), &profile)?;
    }
    println!("profiles written to {}", out.display());
    Ok(())
}
