use dispersive_wave::initial::{steep, InitialData};
use dispersive_wave::model::{energy, PdeParams};
use dispersive_wave::spectral::{GridSpec, StateField};
use dispersive_wave::stepper::{continuous_dependence_probe, simulate, SolverConfig, StopReason};

fn sobolev_bound(e0: f64, half_width: f64) -> f64 {
    e0 * (0.5 + 0.5 / half_width.tanh())
}

#[test]
fn energy_is_conserved_on_completed_runs() {
    let grid = GridSpec::new(30.0, 512).unwrap();
    for (gamma, omega, seed) in [(1.0, 0.5, 1), (2.5, 0.2, 2), (-1.0, 1.0, 3), (0.0, 0.7, 4)] {
        let params = PdeParams::new(gamma, omega).unwrap();
        let u0 = InitialData::RandomBumps { count: 4, amplitude: 0.15 }.build(&grid, &params, seed, 1e-10).unwrap();
        let config = SolverConfig { t_end: 3.0, sample_interval: 0.1, ..Default::default() };
        let run = simulate(&u0, &params, &config).unwrap();
        assert_eq!(run.stop_reason, StopReason::ReachedTEnd);
        assert!(run.energy_drift() <= config.energy_drift_tol, "gamma {gamma}: drift {}", run.energy_drift());
        assert!(run.warnings.iter().all(|w| !w.contains("energy drift")));
    }
}

#[test]
fn amplitude_stays_below_sobolev_bound() {
    let smooth_grid = GridSpec::new(20.0, 512).unwrap();
    let steep_grid = GridSpec::new(14.0, 4096).unwrap();
    let cases = [
        (
            StateField::from_fn(smooth_grid, |x| 0.8 * (-x * x / 3.0).exp()).unwrap(),
            PdeParams::new(1.0, 0.5).unwrap(),
        ),
        (steep(&steep_grid, 1.0, 2.0), PdeParams::new(1.0, 0.0).unwrap()),
    ];
    for (u0, params) in cases {
        let grid = u0.grid().clone();
        let e0 = energy(&u0);
        let bound = sobolev_bound(e0, grid.half_width());
        let config = SolverConfig { t_end: 2.0, sample_interval: 0.01, blowup_m_threshold: 8.0, ..Default::default() };
        let run = simulate(&u0, &params, &config).unwrap();
        for s in &run.samples {
            assert!(s.max_u * s.max_u <= bound * (1.0 + 1e-8), "t = {}: {} > {bound}", s.t, s.max_u * s.max_u);
        }
        // the bound is not vacuous
        assert!(run.samples[0].max_u.powi(2) > 0.1 * bound);
    }
}

#[test]
fn slope_decreases_strictly_before_blowup() {
    let grid = GridSpec::new(14.0, 8192).unwrap();
    let params = PdeParams::new(1.0, 0.0).unwrap();
    for s in [2.0, 4.0] {
        let config = SolverConfig { t_end: 3.0, sample_interval: 1e-3, blowup_slope_factor: Some(3.0), ..Default::default() };
        let run = simulate(&steep(&grid, 1.0, s), &params, &config).unwrap();
        assert_eq!(run.stop_reason, StopReason::BlowupSlope);
        let tail: Vec<f64> = run.slope_trace.iter().rev().take(10).map(|x| x.m).collect();
        assert_eq!(tail.len(), 10);
        assert!(tail.windows(2).all(|w| w[0] < w[1]), "{tail:?}");
    }
}

#[test]
fn gamma_zero_runs_are_global() {
    let grid = GridSpec::new(14.0, 1024).unwrap();
    let params = PdeParams::new(0.0, 0.5).unwrap();
    let config = SolverConfig { t_end: 40.0, dt_init: 0.05, sample_interval: 0.5, ..Default::default() };
    let run = simulate(&steep(&grid, 2.0, 4.0), &params, &config).unwrap();
    assert_eq!(run.stop_reason, StopReason::ReachedTEnd);
    assert!(run.slope_trace.iter().all(|s| s.m == 0.0));
}

#[test]
fn halving_the_step_leaves_final_state_unchanged() {
    let grid = GridSpec::new(20.0, 256).unwrap();
    let params = PdeParams::new(1.5, 0.5).unwrap();
    let u0 = StateField::from_fn(grid, |x| 0.5 * (-x * x / 2.0).exp()).unwrap();
    let coarse = SolverConfig { t_end: 1.0, dt_init: 0.01, dt_min: 1e-6, sample_interval: 0.1, ..Default::default() };
    let fine = SolverConfig { dt_init: 0.005, ..coarse };
    let a = simulate(&u0, &params, &coarse).unwrap();
    let b = simulate(&u0, &params, &fine).unwrap();
    assert!(b.steps >= 2 * a.steps - 10);
    let change = (a.final_state.l2_norm() - b.final_state.l2_norm()).abs();
    assert!(change <= 1e-8, "{change}");
    let diff = a.final_state.add_scaled(&b.final_state, -1.0).unwrap().l2_norm();
    assert!(diff <= 1e-8, "{diff}");
}

#[test]
fn continuous_dependence_is_monotone_and_linear() {
    let grid = GridSpec::new(20.0, 256).unwrap();
    let params = PdeParams::new(1.0, 0.5).unwrap();
    let u0 = StateField::from_fn(grid, |x| 0.3 * (-x * x / 3.0).exp()).unwrap();
    let config = SolverConfig { t_end: 2.0, sample_interval: 0.5, ..Default::default() };
    let d: Vec<f64> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&delta| continuous_dependence_probe(&u0, delta, &params, &config).unwrap())
        .collect();
    assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
    for w in d.windows(2) {
        let ratio = w[0] / w[1];
        assert!(ratio > 10.0 / 3.0 && ratio < 30.0, "ratio {ratio}");
    }
}
