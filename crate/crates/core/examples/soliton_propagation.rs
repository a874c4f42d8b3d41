//! Evolves a solitary wave and compares it with its exact translate.
//!
//! cargo run --release --example soliton_propagation

use dispersive_wave::model::PdeParams;
use dispersive_wave::solitary::{build_profile, verify_traveling, SolitonParams};
use dispersive_wave::spectral::GridSpec;
use dispersive_wave::stepper::SolverConfig;

fn main() -> dispersive_wave::Result<()> {
    let p = SolitonParams::new(2.0, PdeParams::new(1.0, 0.5)?)?;
    let profile = build_profile(&p, &GridSpec::new(40.0, 2048)?)?;
    let config = SolverConfig { t_end: 5.0, checkpoint_interval: Some(0.5), ..Default::default() };
    let report = verify_traveling(&profile, &config)?;

    println!("{:>6} {:>12} {:>12} {:>10}", "t", "rel L2 err", "max err", "crest");
    for i in 0..report.times.len() {
        println!(
            "{:>6.2} {:>12.3e} {:>12.3e} {:>10.5}",
            report.times[i], report.l2_errors[i], report.max_errors[i], report.peak_positions[i]
        );
    }
    println!("measured speed {:.8} (c = {})", report.measured_speed, p.speed);
    Ok(())
}
