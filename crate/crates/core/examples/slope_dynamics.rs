//! Follows m(t) = min g u_x along a steepening run and compares a centred
//! difference of m with the slope equation evaluated at the minimum.
//!
//! cargo run --release --example slope_dynamics [n_points]

use dispersive_wave::initial::steep;
use dispersive_wave::model::PdeParams;
use dispersive_wave::spectral::GridSpec;
use dispersive_wave::stepper::{simulate, SolverConfig};

fn main() -> dispersive_wave::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(16384);
    let grid = GridSpec::new(14.0, n)?;
    let u0 = steep(&grid, 1.0, 2.0);
    let params = PdeParams::new(1.0, 0.0)?;
    let config = SolverConfig {
        t_end: 2.0,
        sample_interval: 1e-3,
        blowup_m_threshold: 10.0,
        ..Default::default()
    };
    let run = simulate(&u0, &params, &config)?;
    let tr = &run.slope_trace;

    println!("{:>7} {:>10} {:>9} {:>12} {:>12} {:>8}", "t", "m", "xi", "dm/dt (fd)", "slope eq", "rel");
    for i in (1..tr.len() - 1).step_by(25) {
        let fd = (tr[i + 1].m - tr[i - 1].m) / (tr[i + 1].t - tr[i - 1].t);
        let rel = (fd - tr[i].m_rhs).abs() / tr[i].m_rhs.abs();
        println!("{:>7.3} {:>10.5} {:>9.4} {:>12.5} {:>12.5} {:>8.1e}", tr[i].t, tr[i].m, tr[i].xi, fd, tr[i].m_rhs, rel);
    }
    println!("stop: {} at t = {}", run.stop_reason.as_str(), run.t_stop);
    Ok(())
}
