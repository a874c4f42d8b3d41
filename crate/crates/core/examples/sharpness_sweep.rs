//! Observed breaking times against the lower bound across a steepness family.
//!
//! cargo run --release --example sharpness_sweep [workers]

use dispersive_wave::analysis::{sharpness_experiment, FamilyMember, SHARPNESS_TOLERANCE};
use dispersive_wave::initial::steep;
use dispersive_wave::model::PdeParams;
use dispersive_wave::spectral::GridSpec;
use dispersive_wave::stepper::SolverConfig;

fn main() -> dispersive_wave::Result<()> {
    let workers = std::env::args().nth(1).and_then(|w| w.parse().ok());
    let grid = GridSpec::new(14.0, 8192)?;
    let family: Vec<FamilyMember> = [2.0, 4.0, 8.0]
        .into_iter()
        .map(|s| FamilyMember { alpha: s, u0: steep(&grid, 1.0, s) })
        .collect();
    let params = PdeParams::new(1.0, 0.0)?;
    let config = SolverConfig { t_end: 5.0, sample_interval: 1e-3, blowup_slope_factor: Some(3.0), ..Default::default() };

    let rows = sharpness_experiment("steepness", &family, &params, &config, workers)?;
    println!("{:>6} {:>9} {:>9} {:>9} {:>9} {:>7}", "s", "E0", "m0", "T_lower", "t*", "ratio");
    for r in &rows {
        println!(
            "{:>6} {:>9.4} {:>9.4} {:>9.5} {:>9.5} {:>7.4}",
            r.alpha,
            r.e0,
            r.m0,
            r.t_lower,
            r.t_star.unwrap_or(f64::NAN),
            r.ratio.unwrap_or(f64::NAN)
        );
    }
    let ok = rows.iter().all(|r| r.respects_bound(SHARPNESS_TOLERANCE) != Some(false));
    println!("bound respected within {}%: {ok}", SHARPNESS_TOLERANCE * 100.0);
    Ok(())
}
