//! Tracks the energy E = int u^2 + u_x^2 along a smooth run.
//!
//! cargo run --release --example energy_conservation

use dispersive_wave::model::PdeParams;
use dispersive_wave::spectral::{GridSpec, StateField};
use dispersive_wave::stepper::{simulate, SolverConfig};

fn main() -> dispersive_wave::Result<()> {
    let grid = GridSpec::new(30.0, 1024)?;
    let u0 = StateField::from_fn(grid, |x| 0.1 * (-x * x).exp())?;
    let params = PdeParams::new(1.0, 0.5)?;
    let config = SolverConfig { t_end: 10.0, sample_interval: 1.0, ..Default::default() };
    let run = simulate(&u0, &params, &config)?;

    let e0 = run.energy_trace[0].energy;
    for s in &run.energy_trace {
        println!("t = {:>5.1}  E = {:.15}  (E - E0)/E0 = {:+.2e}", s.t, s.energy, (s.energy - e0) / e0);
    }
    println!("stop: {}, steps: {}, drift: {:.2e}", run.stop_reason.as_str(), run.steps, run.energy_drift());
    for w in &run.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
