//! Evaluates the blow-up criterion and existence-time bound for steep data,
//! runs it to breaking, and contrasts with the global gamma = 0 twin.
//!
//! cargo run --release --example blowup_bound

use dispersive_wave::analysis::{blowup_condition, existence_bound};
use dispersive_wave::initial::steep;
use dispersive_wave::model::PdeParams;
use dispersive_wave::spectral::GridSpec;
use dispersive_wave::stepper::{simulate, SolverConfig};

fn main() -> dispersive_wave::Result<()> {
    let grid = GridSpec::new(14.0, 8192)?;
    let u0 = steep(&grid, 1.0, 4.0);

    let ch = PdeParams::new(1.0, 0.0)?;
    let bound = existence_bound(&u0, &ch);
    let verdict = blowup_condition(&u0, &ch)?;
    println!("E0 = {:.6}, m0 = {:.6}, K = {:.6} ({})", bound.e0, bound.m0, bound.k, bound.gamma_case.as_str());
    println!("criterion threshold {:.6}, triggered: {}", verdict.threshold, verdict.triggered);
    println!("guaranteed existence up to T_lower = {:.6}", bound.t_lower);

    let config = SolverConfig { t_end: 5.0, sample_interval: 1e-3, blowup_slope_factor: Some(3.0), ..Default::default() };
    let run = simulate(&u0, &ch, &config)?;
    let t_star = run.t_star.unwrap_or(f64::NAN);
    println!(
        "gamma = 1: {} at t = {:.4}, extrapolated t* = {:.6}, t*/T_lower = {:.4}",
        run.stop_reason.as_str(),
        run.t_stop,
        t_star,
        t_star / bound.t_lower
    );

    let bbm = PdeParams::new(0.0, 0.0)?;
    let twin = SolverConfig { t_end: 50.0, dt_init: 0.05, sample_interval: 0.5, ..Default::default() };
    let run = simulate(&u0, &bbm, &twin)?;
    let max_m = run.slope_trace.iter().map(|s| s.m.abs()).fold(0.0, f64::max);
    println!("gamma = 0: {} at t = {}, max |m| = {max_m}", run.stop_reason.as_str(), run.t_stop);
    Ok(())
}
