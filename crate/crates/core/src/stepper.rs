//! Method-of-lines integration of the nonlocal form with classical RK4.
//!
//! The step size follows a transport CFL bound `cfl * h / (|g| max|u| + 2w)`,
//! is capped by `dt_init` and by `0.5/|m|` once the slope `m = min g u_x`
//! goes negative, and is shortened to land exactly on sample times. A run
//! stops when `m` falls below the blow-up threshold (slope blow-up), when a stage turns
//! non-finite, when the controlled step falls below `dt_min`, or at `t_end`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{energy, nonlocal_rhs_values, slope_sample, EnergySample, PdeParams, SlopeSample};
use crate::spectral::{hs_norm, GridSpec, SobolevIndex, StateField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    /// First step and upper bound on every step.
    pub dt_init: f64,
    pub dt_min: f64,
    pub t_end: f64,
    pub cfl_fraction: f64,
    pub blowup_m_threshold: f64,
    /// Also stop once `m <= factor * m(0)` when `m(0) < 0`; the tighter of the two thresholds wins.
    pub blowup_slope_factor: Option<f64>,
    /// Relative energy drift above which the run carries a warning.
    pub energy_drift_tol: f64,
    pub sample_interval: f64,
    /// Admissible `|u0|` at the box edge.
    pub decay_tolerance: f64,
    /// Interval between stored full fields; `None` keeps only the final state.
    pub checkpoint_interval: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dt_init: 1e-2,
            dt_min: 1e-10,
            t_end: 1.0,
            cfl_fraction: 0.5,
            blowup_m_threshold: 1e6,
            blowup_slope_factor: None,
            energy_drift_tol: 1e-5,
            sample_interval: 1e-2,
            decay_tolerance: 1e-10,
            checkpoint_interval: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidSolverConfig(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        positive("dt_init", self.dt_init)?;
        positive("dt_min", self.dt_min)?;
        positive("t_end", self.t_end)?;
        positive("cfl_fraction", self.cfl_fraction)?;
        positive("blowup_m_threshold", self.blowup_m_threshold)?;
        positive("energy_drift_tol", self.energy_drift_tol)?;
        positive("sample_interval", self.sample_interval)?;
        positive("decay_tolerance", self.decay_tolerance)?;
        if let Some(f) = self.blowup_slope_factor {
            if !(f.is_finite() && f > 1.0) {
                return Err(Error::InvalidSolverConfig(format!(
                    "blowup_slope_factor must exceed 1, got {f}"
                )));
            }
        }
        if let Some(c) = self.checkpoint_interval {
            positive("checkpoint_interval", c)?;
        }
        if self.dt_min > self.dt_init {
            return Err(Error::InvalidSolverConfig(format!(
                "dt_min = {} exceeds dt_init = {}",
                self.dt_min, self.dt_init
            )));
        }
        if self.cfl_fraction > 1.0 {
            return Err(Error::InvalidSolverConfig(format!(
                "cfl_fraction must lie in (0, 1], got {}",
                self.cfl_fraction
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    ReachedTEnd,
    BlowupSlope,
    BlowupNonfinite,
    DtUnderflow,
}

impl StopReason {
    pub fn is_blowup(self) -> bool {
        matches!(self, StopReason::BlowupSlope | StopReason::BlowupNonfinite)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::ReachedTEnd => "reached_t_end",
            StopReason::BlowupSlope => "blowup_slope",
            StopReason::BlowupNonfinite => "blowup_nonfinite",
            StopReason::DtUnderflow => "dt_underflow",
        }
    }
}

/// Per-sample summary written to `trace.csv`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: f64,
    pub energy: f64,
    pub m: f64,
    pub xi: f64,
    pub max_u: f64,
    /// Last step taken before this sample (0 at `t = 0`).
    pub dt: f64,
}

#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub t: f64,
    pub field: StateField,
}

#[derive(Debug, Clone)]
pub struct SimulationResult {
    pub samples: Vec<TraceRow>,
    pub energy_trace: Vec<EnergySample>,
    pub slope_trace: Vec<SlopeSample>,
    pub checkpoints: Vec<Checkpoint>,
    pub final_state: StateField,
    pub stop_reason: StopReason,
    pub t_stop: f64,
    /// Blow-up time extrapolated from the slope trace (blow-up runs only).
    pub t_star: Option<f64>,
    pub steps: usize,
    pub warnings: Vec<String>,
}

impl SimulationResult {
    /// `max_t |E(t) - E(0)| / E(0)`; zero for the trivial solution.
    pub fn energy_drift(&self) -> f64 {
        let e0 = match self.energy_trace.first() {
            Some(s) if s.energy > 0.0 => s.energy,
            _ => return 0.0,
        };
        self.energy_trace
            .iter()
            .fold(0.0, |m, s| m.max((s.energy - e0).abs() / e0))
    }

    pub fn max_amplitude(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.max_u))
    }
}

fn rk4_values(grid: &GridSpec, u: &[f64], dt: f64, params: &PdeParams) -> Vec<f64> {
    let stage = |base: &[f64], k: &[f64], a: f64| -> Vec<f64> {
        base.iter().zip(k).map(|(b, d)| b + a * d).collect()
    };
    let k1 = nonlocal_rhs_values(grid, u, params);
    let k2 = nonlocal_rhs_values(grid, &stage(u, &k1, 0.5 * dt), params);
    let k3 = nonlocal_rhs_values(grid, &stage(u, &k2, 0.5 * dt), params);
    let k4 = nonlocal_rhs_values(grid, &stage(u, &k3, dt), params);
    (0..u.len())
        .map(|i| u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// One classical Runge-Kutta step of the nonlocal form.
///
/// A non-finite result surfaces as [`Error::NonFinite`].
pub fn step_rk4(u: &StateField, dt: f64, params: &PdeParams) -> Result<StateField> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidSolverConfig(format!(
            "step size must be positive, got {dt}"
        )));
    }
    let grid = u.grid();
    StateField::new(grid.clone(), rk4_values(grid, u.values(), dt, params))
}

/// `min_i g u_x(x_i)` without the convolution work of [`slope_sample`].
fn min_slope(u: &StateField, gamma: f64) -> f64 {
    if gamma == 0.0 {
        return 0.0;
    }
    let grid = u.grid();
    grid.derivative_values(u.spectrum(), 1)
        .iter()
        .fold(f64::INFINITY, |m, d| m.min(gamma * d))
}

struct Recorder {
    samples: Vec<TraceRow>,
    energy_trace: Vec<EnergySample>,
    slope_trace: Vec<SlopeSample>,
}

impl Recorder {
    fn record(&mut self, u: &StateField, params: &PdeParams, t: f64, dt: f64) {
        if self.samples.last().is_some_and(|s| s.t >= t) {
            return;
        }
        let e = energy(u);
        let s = slope_sample(u, params, t);
        self.samples.push(TraceRow {
            t,
            energy: e,
            m: s.m,
            xi: s.xi,
            max_u: u.max_abs(),
            dt,
        });
        self.energy_trace.push(EnergySample { t, energy: e });
        self.slope_trace.push(s);
    }
}

/// Integrates from `u0` until `t_end` or a stopping event.
pub fn simulate(u0: &StateField, params: &PdeParams, config: &SolverConfig) -> Result<SimulationResult> {
    params.validate()?;
    config.validate()?;
    let edge = u0.edge_magnitude();
    if edge > config.decay_tolerance {
        return Err(Error::DecayViolation {
            edge,
            tolerance: config.decay_tolerance,
        });
    }

    let grid = u0.grid().clone();
    let h = grid.spacing();
    let mut rec = Recorder {
        samples: Vec::new(),
        energy_trace: Vec::new(),
        slope_trace: Vec::new(),
    };
    let mut warnings = Vec::new();
    let mut checkpoints = Vec::new();
    let mut boundary_warned = false;

    let mut u = u0.clone();
    let mut t = 0.0;
    let mut last_dt = 0.0;
    let mut steps = 0usize;
    rec.record(&u, params, t, last_dt);
    if config.checkpoint_interval.is_some() {
        checkpoints.push(Checkpoint { t, field: u.clone() });
    }

    // sample and checkpoint times are k * interval, never accumulated
    let mut next_sample_k = 1u64;
    let mut next_checkpoint_k = 1u64;
    let sample_time = |k: u64| (k as f64 * config.sample_interval).min(config.t_end);
    let checkpoint_time = |k: u64| config.checkpoint_interval.map(|c| (k as f64 * c).min(config.t_end));

    let mut m = min_slope(&u, params.gamma);
    let threshold = match config.blowup_slope_factor {
        Some(f) if m < 0.0 => config.blowup_m_threshold.min(f * m.abs()),
        _ => config.blowup_m_threshold,
    };
    let stop_reason = loop {
        if t >= config.t_end {
            break StopReason::ReachedTEnd;
        }
        let speed = params.gamma.abs() * u.max_abs() + 2.0 * params.omega;
        let mut dt_ctrl = config.dt_init.min(config.cfl_fraction * h / speed.max(1e-12));
        if m < 0.0 {
            dt_ctrl = dt_ctrl.min(0.5 / m.abs());
        }
        if dt_ctrl < config.dt_min {
            break StopReason::DtUnderflow;
        }

        let mut target = sample_time(next_sample_k);
        if let Some(c) = checkpoint_time(next_checkpoint_k) {
            target = target.min(c);
        }
        let (dt, lands) = if t + dt_ctrl >= target * (1.0 - 1e-14) {
            (target - t, true)
        } else {
            (dt_ctrl, false)
        };

        let next = match step_rk4(&u, dt, params) {
            Ok(next) => next,
            Err(Error::NonFinite { .. }) => break StopReason::BlowupNonfinite,
            Err(e) => return Err(e),
        };
        u = next;
        t = if lands { target } else { t + dt };
        last_dt = dt;
        steps += 1;
        m = min_slope(&u, params.gamma);

        if m <= -threshold {
            rec.record(&u, params, t, last_dt);
            break StopReason::BlowupSlope;
        }
        if t >= sample_time(next_sample_k) {
            rec.record(&u, params, t, last_dt);
            next_sample_k += 1;
            if !boundary_warned && u.edge_magnitude() > 1e-6 * u.max_abs() {
                boundary_warned = true;
                warnings.push(format!(
                    "boundary contamination at t = {t}: |u(±L)| = {:.3e} exceeds 1e-6 of max|u| = {:.3e}",
                    u.edge_magnitude(),
                    u.max_abs()
                ));
            }
        }
        if let Some(c) = checkpoint_time(next_checkpoint_k) {
            if t >= c {
                checkpoints.push(Checkpoint { t, field: u.clone() });
                next_checkpoint_k += 1;
            }
        }
    };
    rec.record(&u, params, t, last_dt);

    let mut result = SimulationResult {
        samples: rec.samples,
        energy_trace: rec.energy_trace,
        slope_trace: rec.slope_trace,
        checkpoints,
        final_state: u,
        stop_reason,
        t_stop: t,
        t_star: None,
        steps,
        warnings,
    };
    if stop_reason.is_blowup() {
        result.t_star = extrapolate_blowup_time(&result.slope_trace);
    }
    let drift = result.energy_drift();
    if drift > config.energy_drift_tol && !stop_reason.is_blowup() {
        result.warnings.push(format!(
            "relative energy drift {drift:.3e} exceeds tolerance {:.3e}",
            config.energy_drift_tol
        ));
    }
    Ok(result)
}

/// Zero crossing of a least-squares line through `(t, -2/m)` over the final
/// segment of the slope trace (samples with `|m|` at least half the last value).
///
/// Near breaking `m' ~ -m^2/2`, so `-2/m` is asymptotically `t* - t`.
pub fn extrapolate_blowup_time(trace: &[SlopeSample]) -> Option<f64> {
    let last = trace.last()?;
    if last.m >= 0.0 {
        return None;
    }
    let mut tail: Vec<&SlopeSample> = trace
        .iter()
        .rev()
        .take_while(|s| s.m < 0.0 && s.m <= 0.5 * last.m)
        .collect();
    if tail.len() < 3 {
        tail = trace.iter().rev().take_while(|s| s.m < 0.0).take(5).collect();
    }
    if tail.len() < 2 {
        return None;
    }
    let n = tail.len() as f64;
    let (st, sy) = tail
        .iter()
        .fold((0.0, 0.0), |(a, b), s| (a + s.t, b - 2.0 / s.m));
    let (mt, my) = (st / n, sy / n);
    let (sxy, sxx) = tail.iter().fold((0.0, 0.0), |(a, b), s| {
        let dx = s.t - mt;
        (a + dx * (-2.0 / s.m - my), b + dx * dx)
    });
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    if slope >= 0.0 {
        return None;
    }
    Some(mt - my / slope)
}

/// `H^1` distance at `t_end` between the runs from `u0` and from
/// `u0 + delta * exp(-(x - 1/2)^2)`.
pub fn continuous_dependence_probe(
    u0: &StateField,
    delta: f64,
    params: &PdeParams,
    config: &SolverConfig,
) -> Result<f64> {
    let bump = StateField::from_fn(u0.grid().clone(), |x| (-(x - 0.5) * (x - 0.5)).exp())?;
    let perturbed = u0.add_scaled(&bump, delta)?;
    let a = simulate(u0, params, config)?;
    let b = simulate(&perturbed, params, config)?;
    for (label, r) in [("reference", &a), ("perturbed", &b)] {
        if r.stop_reason != StopReason::ReachedTEnd {
            return Err(Error::Incomparable(format!(
                "{label} run stopped early ({}) at t = {}",
                r.stop_reason.as_str(),
                r.t_stop
            )));
        }
    }
    let diff = b.final_state.add_scaled(&a.final_state, -1.0)?;
    Ok(hs_norm(&diff, SobolevIndex::new(1.0)?))
}
